use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{Arrow, GaussDiagram};
use crate::error::{Error, Result};
use crate::pattern::{ArrowPattern, Family, PatternSet};
use crate::perm::Permutation;

/// Above this many arrows the pair loop is split across threads.
const PARALLEL_THRESHOLD: usize = 384;

/// A set of arrow indices of one diagram, in increasing order.
pub type SubdiagramSelection = Vec<usize>;

/// Lexicographic `size`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All `size`-element arrow subsets of `g`, each once, in lexicographic
/// order. There are none when `size` exceeds the arrow count.
pub fn enumerate_subdiagrams(g: &GaussDiagram, size: usize) -> Combinations {
    let n = g.num_arrows();
    Combinations { n, current: (size <= n).then(|| (0..size).collect()) }
}

fn assigned_matches(p: &ArrowPattern, pair: [&Arrow; 2], binding: Permutation) -> bool {
    let mut pos = [[usize::MAX; 4]; 3];
    for (pa, ga) in p.arrows.iter().zip(pair) {
        if ga.tail.component != binding.apply(pa.tail.role) || ga.head.component != binding.apply(pa.head.role) {
            return false;
        }
        pos[pa.tail.role][pa.tail.rank] = ga.tail.position;
        pos[pa.head.role][pa.head.rank] = ga.head.position;
    }
    (0..3).all(|r| pos[r][..p.circle_sizes[r]].windows(2).all(|w| w[0] < w[1]))
}

fn arrows_match(p: &ArrowPattern, x: &Arrow, y: &Arrow, binding: Permutation) -> bool {
    assigned_matches(p, [x, y], binding) || assigned_matches(p, [y, x], binding)
}

/// Whether the two selected arrows, with circle roles bound to components by
/// `binding`, form the pattern `p` (directions, circles and base-point
/// relative endpoint order; signs are ignored).
pub fn match_pattern(p: &ArrowPattern, sel: &[usize], g: &GaussDiagram, binding: Permutation) -> bool {
    if sel.len() != 2 || sel[0] == sel[1] || sel.iter().any(|&i| i >= g.num_arrows()) {
        return false;
    }
    arrows_match(p, g.arrow(sel[0]), g.arrow(sel[1]), binding)
}

fn spans_three(x: &Arrow, y: &Arrow) -> bool {
    let mut c = [x.tail.component, x.head.component, y.tail.component, y.head.component];
    c.sort_unstable();
    let mut distinct = 1;
    for w in c.windows(2) {
        if w[0] != w[1] {
            distinct += 1;
        }
    }
    distinct == 3
}

/// ⟨A, G⟩ for a single pattern under one binding: the signed count of
/// matching two-arrow subdiagrams.
pub fn pairing(p: &ArrowPattern, binding: Permutation, g: &GaussDiagram) -> Result<i64> {
    g.require_components(3)?;
    let arrows = g.arrows();
    let row = |i: usize| -> i64 {
        let x = &arrows[i];
        let mut s = 0;
        for y in &arrows[i + 1..] {
            if spans_three(x, y) && arrows_match(p, x, y, binding) {
                s += x.sign.value() * y.sign.value();
            }
        }
        s
    };
    let n = arrows.len();
    Ok(if n >= PARALLEL_THRESHOLD { (0..n).into_par_iter().map(row).sum() } else { (0..n).map(row).sum() })
}

/// The 24 pairings ⟨pattern(F), σ⟩ of one diagram, indexed `[family][σ]`
/// with σ in [`Permutation::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CellTable(pub [[i64; 6]; 4]);

impl CellTable {
    /// Computes all 24 pairings with the shipped transcription.
    pub fn compute(g: &GaussDiagram) -> Result<Self> {
        Self::compute_with(shipped(), g)
    }

    pub fn compute_with(patterns: &PatternSet, g: &GaussDiagram) -> Result<Self> {
        g.require_components(3)?;
        let arrows = g.arrows();
        let n = arrows.len();
        let row = |i: usize| -> CellTable {
            let mut t = CellTable::default();
            let x = &arrows[i];
            for y in &arrows[i + 1..] {
                if !spans_three(x, y) {
                    continue;
                }
                let s = x.sign.value() * y.sign.value();
                for f in Family::ALL {
                    let p = patterns.get(f);
                    for (k, &sigma) in Permutation::ALL.iter().enumerate() {
                        if arrows_match(p, x, y, sigma) {
                            t.0[f.index()][k] += s;
                        }
                    }
                }
            }
            t
        };
        Ok(if n >= PARALLEL_THRESHOLD {
            (0..n).into_par_iter().map(row).reduce(CellTable::default, |a, b| a + b)
        } else {
            (0..n).map(row).fold(CellTable::default(), |a, b| a + b)
        })
    }

    pub fn get(&self, f: Family, sigma: Permutation) -> i64 {
        self.0[f.index()][sigma.index()]
    }

    /// The cells flattened in `[family][σ]` order.
    pub fn flat(&self) -> [i64; 24] {
        let mut out = [0; 24];
        for f in 0..4 {
            out[f * 6..f * 6 + 6].copy_from_slice(&self.0[f]);
        }
        out
    }
}

impl Add for CellTable {
    type Output = CellTable;
    fn add(mut self, o: CellTable) -> CellTable {
        for f in 0..4 {
            for s in 0..6 {
                self.0[f][s] += o.0[f][s];
            }
        }
        self
    }
}

impl Sub for CellTable {
    type Output = CellTable;
    fn sub(mut self, o: CellTable) -> CellTable {
        for f in 0..4 {
            for s in 0..6 {
                self.0[f][s] -= o.0[f][s];
            }
        }
        self
    }
}

fn shipped() -> &'static PatternSet {
    use std::sync::OnceLock;
    static SET: OnceLock<PatternSet> = OnceLock::new();
    SET.get_or_init(PatternSet::shipped)
}

/// The 24 coefficients `c[family, σ]` and the overall scale λ of a formula
/// `λ Σ_σ sgn(σ) Σ_F c[F,σ] ⟨F, σ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub entries: [[i64; 6]; 4],
    pub lambda: i64,
}

impl Default for CoefficientVector {
    fn default() -> Self {
        CoefficientVector::zero()
    }
}

impl CoefficientVector {
    pub fn zero() -> Self {
        CoefficientVector { entries: [[0; 6]; 4], lambda: 1 }
    }

    pub fn unit(f: Family, sigma: Permutation) -> Self {
        let mut c = CoefficientVector::zero();
        c.set(f, sigma, 1);
        c
    }

    /// The same coefficients `(a, b, c, d)` for RR, LL, RL, LR at every σ.
    pub fn uniform(a: i64, b: i64, c: i64, d: i64) -> Self {
        let mut v = CoefficientVector::zero();
        for k in 0..6 {
            v.entries[0][k] = a;
            v.entries[1][k] = b;
            v.entries[2][k] = c;
            v.entries[3][k] = d;
        }
        v
    }

    /// The vector f(2,2,1,1) whose value is six times a triple-linking residue.
    pub fn fact_2211() -> Self {
        CoefficientVector::uniform(2, 2, 1, 1)
    }

    /// First invariant family at σ = (i,j,k): the diagram sum
    /// `sgn(σ)·(RR_σ + LL_(k,j,i))`, i.e. the product lk(i,j)·lk(j,k).
    pub fn family_i(sigma: Permutation) -> Self {
        let mut c = CoefficientVector::zero();
        c.add_weighted(Family::RR, sigma, sigma.parity());
        c.add_weighted(Family::LL, sigma.reversed(), sigma.parity());
        c
    }

    /// Second invariant family at σ = (i,j,k): the diagram sum
    /// `RL_(i,j,k) − LR_(j,k,i) + RL_(k,j,i) − LR_(i,k,j)`.
    pub fn family_j(sigma: Permutation) -> Self {
        let [i, j, k] = sigma.images();
        let p = |t: [u8; 3]| Permutation::new(t).expect("rearranged images");
        let mut c = CoefficientVector::zero();
        c.add_weighted(Family::RL, p([i, j, k]), 1);
        c.add_weighted(Family::LR, p([j, k, i]), -1);
        c.add_weighted(Family::RL, p([k, j, i]), 1);
        c.add_weighted(Family::LR, p([i, k, j]), -1);
        c
    }

    /// Based three-term formula for the triple linking number:
    /// `LL_(1,2,3) − LL_(1,3,2) − RL_(2,1,3)` as a diagram sum.
    pub fn triple_linking() -> Self {
        let p = |s: &str| s.parse::<Permutation>().expect("literal permutation");
        let mut c = CoefficientVector::zero();
        c.add_weighted(Family::LL, p("123"), 1);
        c.add_weighted(Family::LL, p("132"), -1);
        c.add_weighted(Family::RL, p("213"), -1);
        c
    }

    pub fn get(&self, f: Family, sigma: Permutation) -> i64 {
        self.entries[f.index()][sigma.index()]
    }

    pub fn set(&mut self, f: Family, sigma: Permutation, v: i64) {
        self.entries[f.index()][sigma.index()] = v;
    }

    /// Adds `w` to the weight the diagram `(f, σ)` gets in the final sum,
    /// i.e. adds `sgn(σ)·w` to the coefficient.
    pub fn add_weighted(&mut self, f: Family, sigma: Permutation, w: i64) {
        self.entries[f.index()][sigma.index()] += sigma.parity() * w;
    }

    pub fn scaled(&self, k: i64) -> Self {
        CoefficientVector { entries: self.entries, lambda: self.lambda * k }
    }

    /// The coefficients with λ multiplied in.
    pub fn normalized(&self) -> Self {
        let mut e = self.entries;
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x *= self.lambda;
            }
        }
        CoefficientVector { entries: e, lambda: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda == 0 || self.entries.iter().flatten().all(|&x| x == 0)
    }

    /// Coefficients (λ applied) flattened in `[family][σ]` order.
    pub fn flat(&self) -> [i64; 24] {
        let n = self.normalized();
        let mut out = [0; 24];
        for f in 0..4 {
            out[f * 6..f * 6 + 6].copy_from_slice(&n.entries[f]);
        }
        out
    }

    pub fn from_flat(v: [i64; 24]) -> Self {
        let mut c = CoefficientVector::zero();
        for f in 0..4 {
            c.entries[f].copy_from_slice(&v[f * 6..f * 6 + 6]);
        }
        c
    }

    /// `sgn(σ)·c[F,σ]` with λ applied, flattened: the weight each diagram
    /// `(F, σ)` carries in the sum.
    pub fn weights(&self) -> [i64; 24] {
        let mut w = self.flat();
        for f in 0..4 {
            for (k, s) in Permutation::ALL.iter().enumerate() {
                w[f * 6 + k] *= s.parity();
            }
        }
        w
    }

    /// Value of the formula on precomputed cells.
    pub fn eval_cells(&self, t: &CellTable) -> i64 {
        self.weights().iter().zip(t.flat()).map(|(w, x)| w * x).sum()
    }

    /// Parses the `family perm coeff` record format; an optional
    /// `lambda <n>` line sets the scale; absent cells are zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = CoefficientVector::zero();
        let mut seen = std::collections::HashSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Coefficients { line: n + 1, message: m };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "lambda" {
                if fields.len() != 2 {
                    return Err(err("expected `lambda <integer>`".into()));
                }
                c.lambda = fields[1].parse().map_err(|e| err(format!("lambda: {e}")))?;
                continue;
            }
            if fields.len() != 3 {
                return Err(err("expected `family perm coeff`".into()));
            }
            let f: Family = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let s: Permutation = fields[1].parse().map_err(|e: Error| err(e.to_string()))?;
            let v: i64 = fields[2].parse().map_err(|e| err(format!("coefficient: {e}")))?;
            if !seen.insert((f, s)) {
                return Err(err(format!("cell {f} {s} given twice")));
            }
            c.set(f, s, v);
        }
        Ok(c)
    }

    /// Renders nonzero cells in the record format (λ line when λ ≠ 1).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.lambda != 1 {
            out.push_str(&format!("lambda {}\n", self.lambda));
        }
        for f in Family::ALL {
            for s in Permutation::ALL {
                let v = self.get(f, s);
                if v != 0 {
                    out.push_str(&format!("{f} {s} {v}\n"));
                }
            }
        }
        out
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for CoefficientVector {
    type Output = CoefficientVector;
    fn add(self, o: CoefficientVector) -> CoefficientVector {
        let a = self.flat();
        let b = o.flat();
        CoefficientVector::from_flat(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Neg for CoefficientVector {
    type Output = CoefficientVector;
    fn neg(self) -> CoefficientVector {
        self.scaled(-1)
    }
}

impl Sub for CoefficientVector {
    type Output = CoefficientVector;
    fn sub(self, o: CoefficientVector) -> CoefficientVector {
        self + (-o)
    }
}

/// `λ Σ_σ sgn(σ) Σ_F c[F,σ]·⟨F, σ; G⟩` with the shipped patterns.
pub fn eval_combination(c: &CoefficientVector, g: &GaussDiagram) -> Result<i64> {
    Ok(c.eval_cells(&CellTable::compute(g)?))
}
