//! Faces of the planar diagram encoded by a Gauss diagram.
//!
//! Each crossing is a 4-valent vertex whose counterclockwise rotation is
//! fixed by its sign: `[over-out, under-out, over-in, under-in]` for a
//! positive crossing and `[over-out, under-in, over-in, under-out]` for a
//! negative one. Tracing faces with this rotation system tells whether the
//! Gauss diagram is realizable (every connected part has Euler
//! characteristic 2) and which arcs bound a common region, which is exactly
//! what R2 and R3 moves need.

use crate::diagram::{End, Endpoint, GaussDiagram};

/// An arc of a component: from slot `index` to the next slot (wrapping
/// through the base point after the last slot). A component without slots
/// has a single closed arc with `index` 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcRef {
    pub component: usize,
    pub index: usize,
}

/// An arc traversed forward (along the orientation) or backward. The face
/// of a dart is the region on its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub arc: usize,
    pub forward: bool,
}

#[derive(Debug, Clone)]
pub struct Faces {
    offsets: Vec<usize>,
    lens: Vec<usize>,
    arc_refs: Vec<ArcRef>,
    /// Face on the left / right of each arc (w.r.t. its orientation).
    left: Vec<usize>,
    right: Vec<usize>,
    faces: Vec<Vec<Dart>>,
    part_of_component: Vec<usize>,
    planar: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct HalfEdge {
    at: Endpoint,
    out: bool,
}

impl Faces {
    pub fn new(g: &GaussDiagram) -> Self {
        let m = g.num_components();
        let lens: Vec<usize> = g.components().iter().map(|c| c.len()).collect();
        let mut offsets = Vec::with_capacity(m);
        let mut arc_refs = Vec::new();
        for (c, &k) in lens.iter().enumerate() {
            offsets.push(arc_refs.len());
            for index in 0..k.max(1) {
                arc_refs.push(ArcRef { component: c, index });
            }
        }
        let n_arcs = arc_refs.len();
        let arc_id = |c: usize, i: usize| offsets[c] + i;

        let rotation = |at: Endpoint| -> [HalfEdge; 4] {
            let a = g.arrow(g.slot(at).arrow);
            let (t, h) = (a.tail, a.head);
            let he = |at, out| HalfEdge { at, out };
            match a.sign {
                crate::diagram::Sign::Pos => [he(t, true), he(h, true), he(t, false), he(h, false)],
                crate::diagram::Sign::Neg => [he(t, true), he(h, false), he(t, false), he(h, true)],
            }
        };
        let next_dart = |d: Dart| -> Dart {
            let ArcRef { component: c, index: i } = arc_refs[d.arc];
            let k = lens[c];
            let arrive = if d.forward {
                HalfEdge { at: Endpoint { component: c, position: (i + 1) % k }, out: false }
            } else {
                HalfEdge { at: Endpoint { component: c, position: i }, out: true }
            };
            let rot = rotation(arrive.at);
            let idx = rot.iter().position(|&h| h == arrive).expect("half-edge is in its rotation");
            let leave = rot[(idx + 3) % 4];
            let c2 = leave.at.component;
            let k2 = lens[c2];
            if leave.out {
                Dart { arc: arc_id(c2, leave.at.position), forward: true }
            } else {
                Dart { arc: arc_id(c2, (leave.at.position + k2 - 1) % k2), forward: false }
            }
        };

        let mut left = vec![usize::MAX; n_arcs];
        let mut right = vec![usize::MAX; n_arcs];
        let mut faces: Vec<Vec<Dart>> = Vec::new();
        for arc in 0..n_arcs {
            for forward in [true, false] {
                let seen = if forward { left[arc] } else { right[arc] };
                if seen != usize::MAX {
                    continue;
                }
                let f = faces.len();
                let mut darts = Vec::new();
                let start = Dart { arc, forward };
                let mut d = start;
                loop {
                    if d.forward {
                        left[d.arc] = f;
                    } else {
                        right[d.arc] = f;
                    }
                    darts.push(d);
                    if lens[arc_refs[d.arc].component] == 0 {
                        break;
                    }
                    d = next_dart(d);
                    if d == start {
                        break;
                    }
                }
                faces.push(darts);
            }
        }

        // Connected parts: components joined by arrows.
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for a in g.arrows() {
            let (x, y) = (find(&mut parent, a.tail.component), find(&mut parent, a.head.component));
            parent[x] = y;
        }
        let part_of_component: Vec<usize> = (0..m).map(|c| find(&mut parent, c)).collect();

        let mut v = vec![0i64; m];
        let mut e = vec![0i64; m];
        let mut fcount = vec![0i64; m];
        for a in g.arrows() {
            v[part_of_component[a.tail.component]] += 1;
        }
        for (c, &k) in lens.iter().enumerate() {
            e[part_of_component[c]] += k as i64;
        }
        for darts in &faces {
            let c = arc_refs[darts[0].arc].component;
            fcount[part_of_component[c]] += 1;
        }
        let planar = (0..m).filter(|&p| v[p] > 0).all(|p| v[p] - e[p] + fcount[p] == 2);

        Faces { offsets, lens, arc_refs, left, right, faces, part_of_component, planar }
    }

    /// Whether every connected part of the diagram is planar, i.e. the
    /// Gauss diagram comes from a classical link diagram.
    pub fn is_planar(&self) -> bool {
        self.planar
    }

    pub fn arc_id(&self, component: usize, index: usize) -> usize {
        self.offsets[component] + index
    }

    pub fn arc_ref(&self, arc: usize) -> ArcRef {
        self.arc_refs[arc]
    }

    pub fn num_arcs(&self) -> usize {
        self.arc_refs.len()
    }

    /// The arc containing insertion position `position` (0..=len) of a component.
    pub fn arc_of_gap(&self, component: usize, position: usize) -> usize {
        let k = self.lens[component];
        if k == 0 {
            return self.offsets[component];
        }
        self.offsets[component] + (position + k - 1) % k
    }

    /// Whether `arc` passes through the base point of its component.
    pub fn is_wrap_arc(&self, arc: usize) -> bool {
        let r = self.arc_refs[arc];
        let k = self.lens[r.component];
        k == 0 || r.index == k - 1
    }

    pub fn left(&self, arc: usize) -> usize {
        self.left[arc]
    }

    pub fn right(&self, arc: usize) -> usize {
        self.right[arc]
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn part(&self, component: usize) -> usize {
        self.part_of_component[component]
    }

    /// The two slot positions bounding a (non-wrap) arc.
    pub fn arc_ends(&self, arc: usize) -> (Endpoint, Endpoint) {
        let r = self.arc_refs[arc];
        let k = self.lens[r.component];
        (
            Endpoint { component: r.component, position: r.index },
            Endpoint { component: r.component, position: (r.index + 1) % k.max(1) },
        )
    }
}

/// Whether `g` is the Gauss diagram of a classical (planar) link diagram.
pub fn is_realizable(g: &GaussDiagram) -> bool {
    Faces::new(g).is_planar()
}

/// Over/under role of an arc between two crossings: both ends over (`Top`),
/// one of each (`Middle`), or both under (`Bottom`).
pub(crate) fn arc_height(g: &GaussDiagram, a: Endpoint, b: Endpoint) -> u8 {
    let t = |e: Endpoint| (g.slot(e).end == End::Tail) as u8;
    match t(a) + t(b) {
        2 => 0,
        1 => 1,
        _ => 2,
    }
}
