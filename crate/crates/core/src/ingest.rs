//! Conversion of 3D polylines and PD codes into Gauss diagrams.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{End, GaussDiagram, Sign, Token};
use crate::error::{Error, Result};

/// Closed polygonal loops in space, one per link component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline3 {
    pub components: Vec<Vec<[f64; 3]>>,
}

/// How many perturbed directions [`project`] tries before giving up.
pub const MAX_PROJECTION_ATTEMPTS: usize = 64;

/// Relative tolerance for degeneracy tests.
const EPS: f64 = 1e-9;

impl Polyline3 {
    pub fn new(components: Vec<Vec<[f64; 3]>>) -> Result<Self> {
        let p = Polyline3 { components };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Polyline("no components".into()));
        }
        for (c, pts) in self.components.iter().enumerate() {
            if pts.len() < 3 {
                return Err(Error::Polyline(format!("component {} has fewer than 3 points", c + 1)));
            }
            if pts.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Polyline(format!("component {} has a non-finite coordinate", c + 1)));
            }
            for i in 0..pts.len() {
                if pts[i] == pts[(i + 1) % pts.len()] {
                    return Err(Error::Polyline(format!("component {} repeats point {}", c + 1, i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Parses the xyz format: one `x y z` point per line, components
    /// separated by one or more blank lines, `#` comments.
    pub fn parse_xyz(text: &str) -> Result<Self> {
        let mut comps: Vec<Vec<[f64; 3]>> = vec![Vec::new()];
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if raw.trim().is_empty() && !comps.last().expect("nonempty").is_empty() {
                    comps.push(Vec::new());
                }
                continue;
            }
            let v: Vec<f64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| Error::Polyline(format!("line {}: bad number `{t}`", n + 1))))
                .collect::<Result<_>>()?;
            if v.len() != 3 {
                return Err(Error::Polyline(format!("line {}: expected 3 coordinates, found {}", n + 1, v.len())));
            }
            comps.last_mut().expect("nonempty").push([v[0], v[1], v[2]]);
        }
        if comps.last().is_some_and(|c| c.is_empty()) {
            comps.pop();
        }
        Polyline3::new(comps)
    }

    /// Parses `{"components": [[[x,y,z], ...], ...]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let p: Polyline3 = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_xyz(&self) -> String {
        let blocks: Vec<String> = self
            .components
            .iter()
            .map(|c| c.iter().map(|p| format!("{} {} {}\n", p[0], p[1], p[2])).collect::<String>())
            .collect();
        blocks.join("\n")
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(a, a).sqrt();
    (n > 0.0 && n.is_finite()).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = dot(v, v);
        if n > 1e-4 && n <= 1.0 {
            return normalize(v).expect("nonzero");
        }
    }
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

struct Crossing {
    over: (usize, usize, f64),
    under: (usize, usize, f64),
    sign: Sign,
    at: [f64; 2],
}

/// Projects along `d` (viewer at +∞·d). Returns `None` when the projection
/// is not generic enough to read off unambiguously.
fn try_project(p: &Polyline3, d: [f64; 3]) -> Option<GaussDiagram> {
    let helper = if d[0].abs() <= d[1].abs() && d[0].abs() <= d[2].abs() {
        [1.0, 0.0, 0.0]
    } else if d[1].abs() <= d[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let u = normalize(cross(helper, d))?;
    let v = cross(d, u);
    let flat: Vec<Vec<([f64; 2], f64)>> = p
        .components
        .iter()
        .map(|c| c.iter().map(|&x| ([dot(x, u), dot(x, v)], dot(x, d))).collect())
        .collect();
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for pt in flat.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(pt.0[k]);
            hi[k] = hi[k].max(pt.0[k]);
        }
    }
    let scale = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt().max(f64::MIN_POSITIVE);
    let tol = EPS * scale;

    struct Seg {
        comp: usize,
        idx: usize,
        a: [f64; 2],
        b: [f64; 2],
        za: f64,
        zb: f64,
        lo: [f64; 2],
        hi: [f64; 2],
    }
    let mut segs = Vec::new();
    for (c, pts) in flat.iter().enumerate() {
        for i in 0..pts.len() {
            let (a, za) = pts[i];
            let (b, zb) = pts[(i + 1) % pts.len()];
            let lo = [a[0].min(b[0]) - tol, a[1].min(b[1]) - tol];
            let hi = [a[0].max(b[0]) + tol, a[1].max(b[1]) + tol];
            segs.push(Seg { comp: c, idx: i, a, b, za, zb, lo, hi });
        }
    }
    let mut crossings: Vec<Crossing> = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            if s.hi[0] < t.lo[0] || t.hi[0] < s.lo[0] || s.hi[1] < t.lo[1] || t.hi[1] < s.lo[1] {
                continue;
            }
            let n = flat[s.comp].len();
            let adjacent = s.comp == t.comp && (t.idx == (s.idx + 1) % n || s.idx == (t.idx + 1) % n);
            let r = [s.b[0] - s.a[0], s.b[1] - s.a[1]];
            let q = [t.b[0] - t.a[0], t.b[1] - t.a[1]];
            let den = cross2(r, q);
            let rl = (r[0] * r[0] + r[1] * r[1]).sqrt();
            let ql = (q[0] * q[0] + q[1] * q[1]).sqrt();
            if den.abs() <= EPS * rl * ql || rl <= tol || ql <= tol {
                if adjacent {
                    // Adjacent segments folding back onto each other overlap.
                    let back = r[0] * q[0] + r[1] * q[1] < 0.0;
                    if back {
                        return None;
                    }
                    continue;
                }
                // Near-parallel segments with overlapping boxes: only safe if far apart.
                let w = [t.a[0] - s.a[0], t.a[1] - s.a[1]];
                let dist = cross2(r, w).abs() / rl.max(f64::MIN_POSITIVE);
                if dist <= 1e3 * tol {
                    return None;
                }
                continue;
            }
            if adjacent {
                continue;
            }
            let w = [t.a[0] - s.a[0], t.a[1] - s.a[1]];
            let ts = cross2(w, q) / den;
            let tt = cross2(w, r) / den;
            let es = tol / rl;
            let et = tol / ql;
            let outside = |x: f64, e: f64| x < -e || x > 1.0 + e;
            if outside(ts, es) || outside(tt, et) {
                continue;
            }
            let near_end = |x: f64, e: f64| x.abs() <= e || (x - 1.0).abs() <= e;
            if near_end(ts, es) || near_end(tt, et) {
                return None;
            }
            let zs = s.za + ts * (s.zb - s.za);
            let zt = t.za + tt * (t.zb - t.za);
            let zscale = (s.za.abs() + s.zb.abs() + t.za.abs() + t.zb.abs()).max(scale);
            if (zs - zt).abs() <= EPS * zscale {
                return None;
            }
            let at = [s.a[0] + ts * r[0], s.a[1] + ts * r[1]];
            let (over, under, od, ud) = if zs > zt {
                ((s.comp, s.idx, ts), (t.comp, t.idx, tt), r, q)
            } else {
                ((t.comp, t.idx, tt), (s.comp, s.idx, ts), q, r)
            };
            let sign = if cross2(od, ud) > 0.0 { Sign::Pos } else { Sign::Neg };
            crossings.push(Crossing { over, under, sign, at });
        }
    }
    // Coincident crossings.
    let mut order: Vec<usize> = (0..crossings.len()).collect();
    order.sort_by(|&a, &b| crossings[a].at[0].total_cmp(&crossings[b].at[0]));
    for w in order.windows(2) {
        let (a, b) = (&crossings[w[0]], &crossings[w[1]]);
        if (a.at[0] - b.at[0]).abs() <= 1e3 * tol && (a.at[1] - b.at[1]).abs() <= 1e3 * tol {
            return None;
        }
    }
    let mut events: Vec<Vec<(usize, f64, Token)>> = vec![Vec::new(); p.components.len()];
    for (k, x) in crossings.iter().enumerate() {
        let label = k as u64 + 1;
        events[x.over.0].push((x.over.1, x.over.2, Token { end: End::Tail, label, sign: x.sign }));
        events[x.under.0].push((x.under.1, x.under.2, Token { end: End::Head, label, sign: x.sign }));
    }
    let words: Vec<Vec<Token>> = events
        .into_iter()
        .map(|mut ev| {
            ev.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            ev.into_iter().map(|e| e.2).collect()
        })
        .collect();
    GaussDiagram::from_tokens(&words).ok()
}

/// Orthogonal projection of a polyline link along `direction` (or a seeded
/// random direction when `None`). Degenerate projections are retried with
/// deterministically perturbed directions.
pub fn project(p: &Polyline3, direction: Option<[f64; 3]>, seed: u64) -> Result<GaussDiagram> {
    project_with_direction(p, direction, seed).map(|(g, _)| g)
}

/// Like [`project`], also returning the direction finally used.
pub fn project_with_direction(p: &Polyline3, direction: Option<[f64; 3]>, seed: u64) -> Result<(GaussDiagram, [f64; 3])> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = match direction {
        Some(d) => normalize(d).ok_or_else(|| Error::BadParameter("projection direction must be nonzero".into()))?,
        None => random_unit(&mut rng),
    };
    for attempt in 0..MAX_PROJECTION_ATTEMPTS {
        let d = if attempt == 0 {
            base
        } else {
            let jitter = random_unit(&mut rng);
            let amount = 1e-3 * attempt as f64;
            normalize([base[0] + amount * jitter[0], base[1] + amount * jitter[1], base[2] + amount * jitter[2]])
                .unwrap_or(base)
        };
        if let Some(g) = try_project(p, d) {
            return Ok((g, d));
        }
    }
    Err(Error::DegenerateProjection { attempts: MAX_PROJECTION_ATTEMPTS })
}

/// A planar-diagram code: crossings `X[a,b,c,d]` listing edge labels
/// counterclockwise, starting from the incoming under-strand `a` (which
/// leaves as `c`). The crossing is positive when the over-strand runs from
/// `d` to `b`. `components` optionally fixes the total component count;
/// missing components are crossingless.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    pub pd: Vec<[u64; 4]>,
    #[serde(default)]
    pub components: Option<usize>,
}

impl PdCode {
    /// Parses text such as `X[1,4,2,5] X[3,6,4,1]` (any non-digit
    /// separators; integers are grouped by four) with an optional
    /// `components: N` line.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut nums = Vec::new();
        let mut components = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if let Some(n) = line.strip_prefix("components:") {
                components = Some(n.trim().parse().map_err(|_| Error::Pd(format!("bad component count `{}`", n.trim())))?);
                continue;
            }
            for tok in line.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()) {
                nums.push(tok.parse::<u64>().map_err(|e| Error::Pd(e.to_string()))?);
            }
        }
        if nums.len() % 4 != 0 {
            return Err(Error::Pd(format!("{} edge labels is not a multiple of 4", nums.len())));
        }
        Ok(PdCode { pd: nums.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect(), components })
    }

    /// Parses `{"pd": [[a,b,c,d], ...], "components": N}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }
}

/// Converts a PD code into a Gauss diagram. Components are ordered by their
/// smallest edge label and based at the start of that edge; orientation is
/// read from the under-strands (`a → c`). A component that never passes
/// under is oriented along its smallest label towards its neighbour with the
/// next larger label.
pub fn pd_to_gauss(code: &PdCode) -> Result<GaussDiagram> {
    let pd = &code.pd;
    let mut inc: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (x, quad) in pd.iter().enumerate() {
        for (pos, &e) in quad.iter().enumerate() {
            inc.entry(e).or_default().push((x, pos));
        }
    }
    for (e, v) in &inc {
        if v.len() != 2 {
            return Err(Error::Pd(format!("edge {e} has {} ends; every edge needs exactly 2", v.len())));
        }
    }
    let mut labels: Vec<u64> = inc.keys().copied().collect();
    labels.sort_unstable();
    let mut visited: HashMap<u64, bool> = labels.iter().map(|&e| (e, false)).collect();

    // Traverse a component starting on edge `e` heading into incidence `into`.
    let walk = |e: u64, into: usize| -> Vec<(u64, usize, usize)> {
        // (edge, crossing entered, position entered)
        let mut out = Vec::new();
        let mut edge = e;
        let mut target = inc[&edge][into];
        loop {
            out.push((edge, target.0, target.1));
            let exit_pos = (target.1 + 2) % 4;
            let next = pd[target.0][exit_pos];
            let ends = &inc[&next];
            let enter = if ends[0] == (target.0, exit_pos) { ends[1] } else { ends[0] };
            edge = next;
            target = enter;
            if edge == e && target == inc[&e][into] {
                break;
            }
            if out.len() > 4 * pd.len() + 4 {
                break;
            }
        }
        out
    };

    let mut comps: Vec<Vec<(usize, bool)>> = Vec::new(); // (crossing, is_over)
    let mut over_entry: Vec<Option<usize>> = vec![None; pd.len()];
    for &start in &labels {
        if visited[&start] {
            continue;
        }
        let forward = walk(start, 1);
        let under_dirs: Vec<bool> = forward.iter().filter(|s| s.2 % 2 == 0).map(|s| s.2 == 0).collect();
        let path = if under_dirs.is_empty() {
            let next_label = |w: &[(u64, usize, usize)]| w.get(1).map(|s| s.0).unwrap_or(u64::MAX);
            let backward = walk(start, 0);
            let (f, b) = (next_label(&forward), next_label(&backward));
            let pick_forward = f == start + 1 || (b != start + 1 && f <= b);
            if pick_forward {
                forward
            } else {
                backward
            }
        } else if under_dirs.iter().all(|&d| d) {
            forward
        } else if under_dirs.iter().all(|&d| !d) {
            walk(start, 0)
        } else {
            return Err(Error::Pd(format!("component through edge {start} passes under in both directions")));
        };
        let mut comp = Vec::new();
        for &(edge, x, pos) in &path {
            *visited.get_mut(&edge).expect("known edge") = true;
            let is_over = pos % 2 == 1;
            if is_over {
                over_entry[x] = Some(pos);
            }
            comp.push((x, is_over));
        }
        comps.push(comp);
    }
    let mut words = Vec::new();
    for comp in &comps {
        let mut w = Vec::new();
        for &(x, is_over) in comp {
            let entry = over_entry[x].ok_or_else(|| Error::Pd(format!("crossing {} has no over-strand", x + 1)))?;
            let sign = if entry == 3 { Sign::Pos } else { Sign::Neg };
            let end = if is_over { End::Tail } else { End::Head };
            w.push(Token { end, label: x as u64 + 1, sign });
        }
        words.push(w);
    }
    if let Some(n) = code.components {
        if words.len() > n {
            return Err(Error::Pd(format!("PD code has {} components, but {n} were declared", words.len())));
        }
        words.resize(n, Vec::new());
    }
    if words.is_empty() {
        return Err(Error::Pd("empty PD code needs `components: N`".into()));
    }
    GaussDiagram::from_tokens(&words).map_err(|e| Error::Pd(e.to_string()))
}

/// The Borromean rings as three ellipses in the coordinate planes, each
/// sampled at `points` vertices.
pub fn borromean_ellipses(points: usize) -> Polyline3 {
    let n = points.max(8);
    let ring = |f: &dyn Fn(f64) -> [f64; 3]| -> Vec<[f64; 3]> {
        (0..n).map(|i| f(std::f64::consts::TAU * i as f64 / n as f64)).collect()
    };
    Polyline3 {
        components: vec![
            ring(&|t| [2.0 * t.cos(), t.sin(), 0.0]),
            ring(&|t| [0.0, 2.0 * t.cos(), t.sin()]),
            ring(&|t| [t.sin(), 0.0, 2.0 * t.cos()]),
        ],
    }
}
