//! Reidemeister and base-point moves acting directly on Gauss diagrams.
//!
//! Removal moves and R3 are located through the faces of the diagram: an R1
//! site is a monogon, an R2 site a bigon whose two edges lie on the over-
//! and under-strand respectively, and an R3 site a triangle with one edge
//! over both others, one in the middle and one under both. R2 additions are
//! only offered along arcs that share a face, with the orientation case and
//! crossing signs forced by the side of that face, so planar diagrams stay
//! planar. No move touches an arc that passes through a base point; sliding
//! a base point is its own move.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{End, Endpoint, GaussDiagram, Sign, Token};
use crate::error::{Error, Result};
use crate::faces::{arc_height, Dart, Faces};

/// An insertion position on a component: `position` slots precede it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gap {
    pub component: usize,
    pub position: usize,
}

/// The 8 oriented R3 configurations up to the move itself: the cyclic order
/// of the top, middle and bottom strands around the triangle, and whether
/// the middle and bottom strands run around the triangle the same way as
/// the top strand. The move preserves the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct R3Variant {
    pub top_middle_bottom_ccw: bool,
    pub middle_aligned: bool,
    pub bottom_aligned: bool,
}

impl R3Variant {
    pub fn all() -> [R3Variant; 8] {
        std::array::from_fn(|i| R3Variant {
            top_middle_bottom_ccw: i & 4 != 0,
            middle_aligned: i & 2 != 0,
            bottom_aligned: i & 1 != 0,
        })
    }

    pub fn index(self) -> usize {
        (self.top_middle_bottom_ccw as usize) * 4 + (self.middle_aligned as usize) * 2 + self.bottom_aligned as usize
    }
}

/// Move families, used for labelling and sampling mixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    BasePoint,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] =
        [MoveKind::R1Add, MoveKind::R1Remove, MoveKind::R2Add, MoveKind::R2Remove, MoveKind::R3, MoveKind::BasePoint];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Add => "R1_add",
            MoveKind::R1Remove => "R1_remove",
            MoveKind::R2Add => "R2_add",
            MoveKind::R2Remove => "R2_remove",
            MoveKind::R3 => "R3",
            MoveKind::BasePoint => "BasePoint",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One applicable move on one diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveSite {
    /// Insert a kink: two adjacent endpoints of a new arrow at `gap`.
    R1Add { gap: Gap, sign: Sign, tail_first: bool },
    /// Remove the kink whose two endpoints sit at `at` and the next slot.
    R1Remove { at: Endpoint },
    /// Push the second strand across the first, creating two crossings.
    /// `sign` is the sign of the first new crossing met along the first strand.
    R2Add { first: Gap, second: Gap, first_over: bool, parallel: bool, sign: Sign },
    /// Remove the bigon whose over-edge starts at `over` and under-edge at `under`.
    R2Remove { over: Endpoint, under: Endpoint },
    /// Slide across the triangle whose top, middle and bottom edges start at
    /// the given slots.
    R3 { top: Endpoint, middle: Endpoint, bottom: Endpoint, variant: R3Variant },
    /// Slide the base point of `component` past its first endpoint
    /// (`forward`) or back past its last one.
    BasePoint { component: usize, forward: bool },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Add { .. } => MoveKind::R1Add,
            MoveSite::R1Remove { .. } => MoveKind::R1Remove,
            MoveSite::R2Add { .. } => MoveKind::R2Add,
            MoveSite::R2Remove { .. } => MoveKind::R2Remove,
            MoveSite::R3 { .. } => MoveKind::R3,
            MoveSite::BasePoint { .. } => MoveKind::BasePoint,
        }
    }

    /// Components touched by the move.
    pub fn components(&self) -> Vec<usize> {
        let mut c = match *self {
            MoveSite::R1Add { gap, .. } => vec![gap.component],
            MoveSite::R1Remove { at } => vec![at.component],
            MoveSite::R2Add { first, second, .. } => vec![first.component, second.component],
            MoveSite::R2Remove { over, under } => vec![over.component, under.component],
            MoveSite::R3 { top, middle, bottom, .. } => vec![top.component, middle.component, bottom.component],
            MoveSite::BasePoint { component, .. } => vec![component],
        };
        c.sort_unstable();
        c.dedup();
        c
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ep = |e: Endpoint| format!("c{}@{}", e.component + 1, e.position);
        let gp = |g: Gap| format!("c{}|{}", g.component + 1, g.position);
        match *self {
            MoveSite::R1Add { gap, sign, tail_first } => {
                write!(f, "R1_add {} sign {} {}", gp(gap), sign.symbol(), if tail_first { "OU" } else { "UO" })
            }
            MoveSite::R1Remove { at } => write!(f, "R1_remove {}", ep(at)),
            MoveSite::R2Add { first, second, first_over, parallel, sign } => write!(
                f,
                "R2_add {} {} {} {} sign {}",
                gp(first),
                gp(second),
                if first_over { "first-over" } else { "second-over" },
                if parallel { "parallel" } else { "antiparallel" },
                sign.symbol()
            ),
            MoveSite::R2Remove { over, under } => write!(f, "R2_remove {} {}", ep(over), ep(under)),
            MoveSite::R3 { top, middle, bottom, variant } => {
                write!(f, "R3 {} {} {} variant {}", ep(top), ep(middle), ep(bottom), variant.index())
            }
            MoveSite::BasePoint { component, forward } => {
                write!(f, "BasePoint c{} {}", component + 1, if forward { "forward" } else { "backward" })
            }
        }
    }
}

/// A move together with the map from old to new arrow indices (`None` for
/// arrows the move deleted).
#[derive(Debug, Clone)]
pub struct MoveResult {
    pub diagram: GaussDiagram,
    pub arrow_map: Vec<Option<usize>>,
}

fn gaps(g: &GaussDiagram) -> Vec<Gap> {
    let mut out = Vec::new();
    for (c, slots) in g.components().iter().enumerate() {
        for position in 0..=slots.len() {
            out.push(Gap { component: c, position });
        }
    }
    out
}

/// Order two gaps on the same arc along the arc; `None` if they lie on different arcs.
fn same_arc_order(faces: &Faces, g: &GaussDiagram, a: Gap, b: Gap) -> Option<(Gap, Gap)> {
    if a.component != b.component {
        return None;
    }
    if faces.arc_of_gap(a.component, a.position) != faces.arc_of_gap(b.component, b.position) {
        return None;
    }
    let k = g.component(a.component).len();
    // On the arc through the base point, the end of the word comes first.
    let key = |x: Gap| if k > 0 && x.position == k { 0 } else { 1 };
    Some(if key(a) <= key(b) { (a, b) } else { (b, a) })
}

/// Every valid R2 addition between the two gaps.
pub fn r2_add_options(g: &GaussDiagram, faces: &Faces, a: Gap, b: Gap) -> Vec<MoveSite> {
    let (first, second) = same_arc_order(faces, g, a, b).unwrap_or((a, b));
    let a1 = faces.arc_of_gap(first.component, first.position);
    let a2 = faces.arc_of_gap(second.component, second.position);
    let mut out = Vec::new();
    let mut push = |site: MoveSite| {
        if !out.contains(&site) {
            out.push(site);
        }
    };
    if faces.part(first.component) != faces.part(second.component) {
        for first_over in [true, false] {
            for parallel in [true, false] {
                for sign in [Sign::Pos, Sign::Neg] {
                    push(MoveSite::R2Add { first, second, first_over, parallel, sign });
                }
            }
        }
        return out;
    }
    for left1 in [true, false] {
        for left2 in [true, false] {
            let f1 = if left1 { faces.left(a1) } else { faces.right(a1) };
            let f2 = if left2 { faces.left(a2) } else { faces.right(a2) };
            if f1 != f2 {
                continue;
            }
            let parallel = left1 != left2;
            for first_over in [true, false] {
                let over = if first_over { 1 } else { -1 };
                let side = if left1 { 1 } else { -1 };
                let along_second = -over * side;
                let x = if parallel { along_second } else { -along_second };
                let sign = if x > 0 { Sign::Pos } else { Sign::Neg };
                push(MoveSite::R2Add { first, second, first_over, parallel, sign });
            }
        }
    }
    out
}

fn arc_face_darts(faces: &Faces, arcs: &[usize]) -> Option<Vec<Dart>> {
    // The candidate face containing the first arc on either side, with exactly these arcs.
    for forward in [true, false] {
        let f = if forward { faces.left(arcs[0]) } else { faces.right(arcs[0]) };
        let darts = &faces.faces()[f];
        if darts.len() == arcs.len() {
            let mut seen: Vec<usize> = darts.iter().map(|d| d.arc).collect();
            seen.sort_unstable();
            let mut want = arcs.to_vec();
            want.sort_unstable();
            if seen == want {
                return Some(darts.clone());
            }
        }
    }
    None
}

fn validate_r1_remove(g: &GaussDiagram, faces: &Faces, at: Endpoint) -> Result<()> {
    let k = g.components().get(at.component).map(|c| c.len()).unwrap_or(0);
    if at.position + 1 >= k {
        return Err(Error::StaleSite("R1_remove needs two adjacent slots before the base point".into()));
    }
    let s1 = g.slot(at);
    let s2 = g.slot(Endpoint { component: at.component, position: at.position + 1 });
    if s1.arrow != s2.arrow {
        return Err(Error::StaleSite("R1_remove slots belong to different arrows".into()));
    }
    let arc = faces.arc_id(at.component, at.position);
    if arc_face_darts(faces, &[arc]).is_none() {
        return Err(Error::StaleSite("R1_remove loop does not bound a monogon".into()));
    }
    Ok(())
}

fn validate_r2_remove(g: &GaussDiagram, faces: &Faces, over: Endpoint, under: Endpoint) -> Result<[usize; 2]> {
    let stale = |m: &str| Error::StaleSite(format!("R2_remove: {m}"));
    let adjacent = |e: Endpoint| g.components().get(e.component).is_some_and(|c| e.position + 1 < c.len());
    if !adjacent(over) || !adjacent(under) {
        return Err(stale("edges must be two adjacent slots before the base point"));
    }
    let next = |e: Endpoint| Endpoint { component: e.component, position: e.position + 1 };
    let (o1, o2, u1, u2) = (g.slot(over), g.slot(next(over)), g.slot(under), g.slot(next(under)));
    if o1.end != End::Tail || o2.end != End::Tail || u1.end != End::Head || u2.end != End::Head {
        return Err(stale("one edge must pass over both crossings and the other under both"));
    }
    let mut a = [o1.arrow, o2.arrow];
    let mut b = [u1.arrow, u2.arrow];
    a.sort_unstable();
    b.sort_unstable();
    if a != b || a[0] == a[1] {
        return Err(stale("edges do not join the same two crossings"));
    }
    if g.arrow(a[0]).sign == g.arrow(a[1]).sign {
        return Err(stale("bigon crossings must have opposite signs"));
    }
    let arcs = [faces.arc_id(over.component, over.position), faces.arc_id(under.component, under.position)];
    if arc_face_darts(faces, &arcs).is_none() {
        return Err(stale("edges do not bound a bigon face"));
    }
    Ok(a)
}

fn classify_r3(g: &GaussDiagram, faces: &Faces, arcs: [usize; 3]) -> Option<(Endpoint, Endpoint, Endpoint, R3Variant)> {
    if arcs.iter().any(|&a| faces.is_wrap_arc(a)) {
        return None;
    }
    let darts = arc_face_darts(faces, &arcs)?;
    let mut by_height: [Option<(usize, Dart)>; 3] = [None; 3];
    let mut arrows = Vec::new();
    for (pos, d) in darts.iter().enumerate() {
        let (s, e) = faces.arc_ends(d.arc);
        let h = arc_height(g, s, e) as usize;
        if by_height[h].is_some() {
            return None;
        }
        by_height[h] = Some((pos, *d));
        arrows.push(g.slot(s).arrow);
        arrows.push(g.slot(e).arrow);
    }
    arrows.sort_unstable();
    let distinct = arrows.len() == 6 && arrows[0] == arrows[1] && arrows[2] == arrows[3] && arrows[4] == arrows[5];
    if !distinct || arrows[1] == arrows[2] || arrows[3] == arrows[4] {
        return None;
    }
    let [t, m, b] = by_height.map(|x| x.expect("three heights"));
    let start = |d: Dart| faces.arc_ends(d.arc).0;
    let variant = R3Variant {
        top_middle_bottom_ccw: (t.0 + 1) % 3 == m.0,
        middle_aligned: m.1.forward == t.1.forward,
        bottom_aligned: b.1.forward == t.1.forward,
    };
    Some((start(t.1), start(m.1), start(b.1), variant))
}

fn validate_r3(g: &GaussDiagram, faces: &Faces, site: &MoveSite) -> Result<()> {
    let MoveSite::R3 { top, middle, bottom, variant } = *site else { unreachable!() };
    let ok = [top, middle, bottom].iter().all(|e| {
        g.components().get(e.component).is_some_and(|c| e.position + 1 < c.len())
    });
    if !ok {
        return Err(Error::StaleSite("R3 edges must be two adjacent slots before the base point".into()));
    }
    let arcs = [top, middle, bottom].map(|e| faces.arc_id(e.component, e.position));
    match classify_r3(g, faces, arcs) {
        Some((t, m, b, v)) if t == top && m == middle && b == bottom && v == variant => Ok(()),
        _ => Err(Error::StaleSite("R3 edges do not bound a movable triangle".into())),
    }
}

/// All applicable moves. Additions are listed at every gap; R2 additions for
/// every unordered pair of gaps with every valid orientation/sign case.
pub fn applicable_moves(g: &GaussDiagram) -> Vec<MoveSite> {
    let faces = Faces::new(g);
    let mut out = Vec::new();
    let all_gaps = gaps(g);
    for &gap in &all_gaps {
        for sign in [Sign::Pos, Sign::Neg] {
            for tail_first in [true, false] {
                out.push(MoveSite::R1Add { gap, sign, tail_first });
            }
        }
    }
    for (i, &a) in all_gaps.iter().enumerate() {
        for &b in &all_gaps[i..] {
            out.extend(r2_add_options(g, &faces, a, b));
        }
    }
    out.extend(removal_and_r3_sites(g, &faces));
    out.extend(base_point_sites(g));
    out
}

fn base_point_sites(g: &GaussDiagram) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for (component, slots) in g.components().iter().enumerate() {
        if !slots.is_empty() {
            out.push(MoveSite::BasePoint { component, forward: true });
            out.push(MoveSite::BasePoint { component, forward: false });
        }
    }
    out
}

/// R1/R2 removals and R3 sites, found from small faces.
pub fn removal_and_r3_sites(g: &GaussDiagram, faces: &Faces) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for darts in faces.faces() {
        if darts.iter().any(|d| faces.is_wrap_arc(d.arc)) {
            continue;
        }
        match darts.len() {
            1 => {
                let (s, _) = faces.arc_ends(darts[0].arc);
                if validate_r1_remove(g, faces, s).is_ok() {
                    out.push(MoveSite::R1Remove { at: s });
                }
            }
            2 => {
                let (s1, e1) = faces.arc_ends(darts[0].arc);
                let (s2, _) = faces.arc_ends(darts[1].arc);
                let (over, under) = if arc_height(g, s1, e1) == 0 { (s1, s2) } else { (s2, s1) };
                if validate_r2_remove(g, faces, over, under).is_ok() {
                    out.push(MoveSite::R2Remove { over, under });
                }
            }
            3 => {
                let arcs = [darts[0].arc, darts[1].arc, darts[2].arc];
                if let Some((top, middle, bottom, variant)) = classify_r3(g, faces, arcs) {
                    out.push(MoveSite::R3 { top, middle, bottom, variant });
                }
            }
            _ => {}
        }
    }
    out.sort_by_key(|s| format!("{s}"));
    out
}

/// Applies a move, returning the new diagram.
pub fn apply_move(g: &GaussDiagram, site: &MoveSite) -> Result<GaussDiagram> {
    apply_move_tracked(g, site).map(|r| r.diagram)
}

/// Applies a move and reports where every old arrow went.
pub fn apply_move_tracked(g: &GaussDiagram, site: &MoveSite) -> Result<MoveResult> {
    let faces = Faces::new(g);
    apply_with_faces(g, &faces, site)
}

fn check_gap(g: &GaussDiagram, gap: Gap) -> Result<()> {
    match g.components().get(gap.component) {
        Some(c) if gap.position <= c.len() => Ok(()),
        _ => Err(Error::StaleSite(format!("gap c{}|{} does not exist", gap.component + 1, gap.position))),
    }
}

fn apply_with_faces(g: &GaussDiagram, faces: &Faces, site: &MoveSite) -> Result<MoveResult> {
    let mut words = g.to_tokens();
    let n = g.num_arrows() as u64;
    let (x, y) = (n + 1, n + 2);
    match *site {
        MoveSite::R1Add { gap, sign, tail_first } => {
            check_gap(g, gap)?;
            let (e1, e2) = if tail_first { (End::Tail, End::Head) } else { (End::Head, End::Tail) };
            let toks = [Token { end: e1, label: x, sign }, Token { end: e2, label: x, sign }];
            words[gap.component].splice(gap.position..gap.position, toks);
        }
        MoveSite::R1Remove { at } => {
            validate_r1_remove(g, faces, at)?;
            words[at.component].drain(at.position..at.position + 2);
        }
        MoveSite::R2Add { first, second, first_over, parallel, sign } => {
            check_gap(g, first)?;
            check_gap(g, second)?;
            if !r2_add_options(g, faces, first, second).contains(site) {
                return Err(Error::StaleSite(format!("{site} is not realizable here")));
            }
            let (e1, e2) = if first_over { (End::Tail, End::Head) } else { (End::Head, End::Tail) };
            let tx = Token { end: e1, label: x, sign };
            let ty = Token { end: e1, label: y, sign: sign.flip() };
            let first_toks = vec![tx, ty];
            let (sx, sy) = (Token { end: e2, ..tx }, Token { end: e2, ..ty });
            let second_toks = if parallel { vec![sx, sy] } else { vec![sy, sx] };
            if first == second {
                let mut all = first_toks;
                all.extend(second_toks);
                words[first.component].splice(first.position..first.position, all);
            } else if first.component == second.component && first.position > second.position {
                words[first.component].splice(first.position..first.position, first_toks);
                words[second.component].splice(second.position..second.position, second_toks);
            } else {
                words[second.component].splice(second.position..second.position, second_toks);
                words[first.component].splice(first.position..first.position, first_toks);
            }
        }
        MoveSite::R2Remove { over, under } => {
            validate_r2_remove(g, faces, over, under)?;
            let mut cuts = [over, under];
            cuts.sort();
            for e in cuts.iter().rev() {
                words[e.component].drain(e.position..e.position + 2);
            }
        }
        MoveSite::R3 { top, middle, bottom, .. } => {
            validate_r3(g, faces, site)?;
            for e in [top, middle, bottom] {
                words[e.component].swap(e.position, e.position + 1);
            }
        }
        MoveSite::BasePoint { component, forward } => {
            let w = words
                .get_mut(component)
                .ok_or_else(|| Error::StaleSite(format!("component {} does not exist", component + 1)))?;
            if w.is_empty() {
                return Err(Error::StaleSite("base point move on a component without endpoints".into()));
            }
            if forward {
                w.rotate_left(1);
            } else {
                w.rotate_right(1);
            }
        }
    }
    let (diagram, labels) = GaussDiagram::from_tokens_with_labels(&words)?;
    let mut arrow_map = vec![None; g.num_arrows()];
    for (new, &label) in labels.iter().enumerate() {
        if label <= n {
            arrow_map[label as usize - 1] = Some(new);
        }
    }
    Ok(MoveResult { diagram, arrow_map })
}

/// Relative weights for choosing a move family in random walks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveMix {
    pub r1_add: f64,
    pub r1_remove: f64,
    pub r2_add: f64,
    pub r2_remove: f64,
    pub r3: f64,
    pub base_point: f64,
}

impl Default for MoveMix {
    fn default() -> Self {
        MoveMix { r1_add: 1.0, r1_remove: 1.0, r2_add: 2.0, r2_remove: 2.0, r3: 4.0, base_point: 1.0 }
    }
}

impl MoveMix {
    pub fn weight(&self, k: MoveKind) -> f64 {
        match k {
            MoveKind::R1Add => self.r1_add,
            MoveKind::R1Remove => self.r1_remove,
            MoveKind::R2Add => self.r2_add,
            MoveKind::R2Remove => self.r2_remove,
            MoveKind::R3 => self.r3,
            MoveKind::BasePoint => self.base_point,
        }
    }

    pub fn set(&mut self, k: MoveKind, w: f64) {
        match k {
            MoveKind::R1Add => self.r1_add = w,
            MoveKind::R1Remove => self.r1_remove = w,
            MoveKind::R2Add => self.r2_add = w,
            MoveKind::R2Remove => self.r2_remove = w,
            MoveKind::R3 => self.r3 = w,
            MoveKind::BasePoint => self.base_point = w,
        }
    }

    /// Parses `r1=1,r2=2,r3=4,bp=1` style overrides. `r1`/`r2` set both the
    /// add and remove weight; `r1_add`, `r2_remove`, ... set one.
    pub fn parse(text: &str) -> Result<Self> {
        MoveMix::parse_with(MoveMix::default(), text)
    }

    /// Like [`MoveMix::parse`], overriding `base` instead of the default.
    pub fn parse_with(base: MoveMix, text: &str) -> Result<Self> {
        let mut mix = base;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::BadParameter(format!("mix entry `{part}`")))?;
            let w: f64 = v.trim().parse().map_err(|_| Error::BadParameter(format!("mix weight `{v}`")))?;
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::BadParameter(format!("mix weight `{v}` must be a nonnegative number")));
            }
            let kinds: &[MoveKind] = match k.trim() {
                "r1" => &[MoveKind::R1Add, MoveKind::R1Remove],
                "r2" => &[MoveKind::R2Add, MoveKind::R2Remove],
                "r1_add" => &[MoveKind::R1Add],
                "r1_remove" => &[MoveKind::R1Remove],
                "r2_add" => &[MoveKind::R2Add],
                "r2_remove" => &[MoveKind::R2Remove],
                "r3" => &[MoveKind::R3],
                "bp" | "basepoint" | "base_point" => &[MoveKind::BasePoint],
                other => return Err(Error::BadParameter(format!("unknown move kind `{other}` in mix"))),
            };
            for &kind in kinds {
                mix.set(kind, w);
            }
        }
        Ok(mix)
    }
}

/// Draws one random applicable move of family `kind`, if any exists.
pub fn random_site_of_kind<R: Rng>(g: &GaussDiagram, faces: &Faces, kind: MoveKind, rng: &mut R) -> Option<MoveSite> {
    match kind {
        MoveKind::R1Add => {
            let all = gaps(g);
            let gap = *all.choose(rng)?;
            let sign = if rng.gen() { Sign::Pos } else { Sign::Neg };
            Some(MoveSite::R1Add { gap, sign, tail_first: rng.gen() })
        }
        MoveKind::R2Add => {
            let all = gaps(g);
            for _ in 0..32 {
                let a = *all.choose(rng)?;
                let b = *all.choose(rng)?;
                let opts = r2_add_options(g, faces, a, b);
                if let Some(s) = opts.choose(rng) {
                    return Some(*s);
                }
            }
            None
        }
        MoveKind::BasePoint => base_point_sites(g).choose(rng).copied(),
        MoveKind::R1Remove | MoveKind::R2Remove | MoveKind::R3 => {
            let sites: Vec<MoveSite> =
                removal_and_r3_sites(g, faces).into_iter().filter(|s| s.kind() == kind).collect();
            sites.choose(rng).copied()
        }
    }
}

/// Draws one random applicable move, choosing the family by `mix` among the
/// families that currently have a site. Additions are suppressed when
/// `allow_add` is false.
pub fn random_move<R: Rng>(g: &GaussDiagram, mix: &MoveMix, allow_add: bool, rng: &mut R) -> Option<MoveSite> {
    let faces = Faces::new(g);
    let small = removal_and_r3_sites(g, &faces);
    let mut kinds: Vec<(MoveKind, f64)> = Vec::new();
    for k in MoveKind::ALL {
        let w = mix.weight(k);
        if w <= 0.0 {
            continue;
        }
        let available = match k {
            MoveKind::R1Add | MoveKind::R2Add => allow_add,
            MoveKind::BasePoint => g.components().iter().any(|c| !c.is_empty()),
            other => small.iter().any(|s| s.kind() == other),
        };
        if available {
            kinds.push((k, w));
        }
    }
    while !kinds.is_empty() {
        let total: f64 = kinds.iter().map(|k| k.1).sum();
        let mut r = rng.gen::<f64>() * total;
        let mut pick = kinds.len() - 1;
        for (i, k) in kinds.iter().enumerate() {
            if r < k.1 {
                pick = i;
                break;
            }
            r -= k.1;
        }
        let kind = kinds[pick].0;
        let site = match kind {
            MoveKind::R1Remove | MoveKind::R2Remove | MoveKind::R3 => {
                let of_kind: Vec<&MoveSite> = small.iter().filter(|s| s.kind() == kind).collect();
                of_kind.choose(rng).map(|s| **s)
            }
            _ => random_site_of_kind(g, &faces, kind, rng),
        };
        if site.is_some() {
            return site;
        }
        kinds.remove(pick);
    }
    None
}

/// One step of a walk: the move taken and the diagram it produced.
#[derive(Debug, Clone)]
pub struct WalkStep {
    pub site: MoveSite,
    pub diagram: GaussDiagram,
}

/// Random walk of `steps` moves from `g`, deterministic in `seed`. Returns
/// the moves with their results; additions are suppressed once the crossing
/// count reaches `max_crossings`. Stops early only if no move exists at all.
pub fn random_walk_steps(g: &GaussDiagram, steps: usize, seed: u64, max_crossings: usize, mix: &MoveMix) -> Vec<WalkStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = g.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        // R2 additions add two crossings.
        let allow_add = current.num_arrows() + 2 <= max_crossings;
        let Some(site) = random_move(&current, mix, allow_add, &mut rng) else { break };
        let next = apply_move(&current, &site).expect("sampled sites are applicable");
        out.push(WalkStep { site, diagram: next.clone() });
        current = next;
    }
    out
}

/// The sequence `[g, g₁, …, g_steps]` of a random walk.
pub fn random_walk(g: &GaussDiagram, steps: usize, seed: u64, max_crossings: usize) -> Vec<GaussDiagram> {
    let mut out = vec![g.clone()];
    out.extend(random_walk_steps(g, steps, seed, max_crossings, &MoveMix::default()).into_iter().map(|s| s.diagram));
    out
}
