//! Recovers invariant coefficient vectors empirically: sample move-related
//! diagram pairs, record how each of the 24 pairings changes, and compute
//! the exact nullspace of those constraints.
//!
//! The result is evidence, not proof: a vector in the nullspace is invariant
//! on every sampled pair, and the space can only shrink as rows are added.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::GaussDiagram;
use crate::faces::Faces;
use crate::links::{derive_seed, random_link_diagram, RandomMode};
use crate::moves::{apply_move, random_site_of_kind, removal_and_r3_sites, MoveKind, MoveMix, MoveSite};
use crate::pairing::{CellTable, CoefficientVector};
use crate::perm::Permutation;

/// One sampled constraint. `row[F*6 + σ] = sgn(σ)·(⟨F,σ; G′⟩ − ⟨F,σ; G⟩)`
/// so that a coefficient vector `c` is invariant on the pair iff
/// `row · c = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationRow {
    pub kind: MoveKind,
    /// Number of distinct components the move touched.
    pub components: usize,
    pub row: Vec<i64>,
}

impl RelationRow {
    pub fn from_pair(site: &MoveSite, before: &CellTable, after: &CellTable) -> Self {
        let d = (*after - *before).flat();
        let mut row = d.to_vec();
        for f in 0..4 {
            for (k, s) in Permutation::ALL.iter().enumerate() {
                row[f * 6 + k] *= s.parity();
            }
        }
        RelationRow { kind: site.kind(), components: site.components().len(), row }
    }

    pub fn annihilates(&self, c: &CoefficientVector) -> bool {
        self.row.iter().zip(c.flat()).map(|(r, x)| r * x).sum::<i64>() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.row.iter().all(|&x| x == 0)
    }
}

/// One sampled move pair.
#[derive(Debug, Clone)]
pub struct SampledPair {
    pub before: GaussDiagram,
    pub after: GaussDiagram,
    pub site: MoveSite,
}

/// Rows harvested by [`sample_relations`].
#[derive(Debug, Clone)]
pub struct RelationSample {
    /// Distinct rows, in first-seen order.
    pub rows: Vec<RelationRow>,
    /// Every sampled pair, in sample order.
    pub pairs: Vec<SampledPair>,
    /// Sampled pairs per move kind.
    pub counts: BTreeMap<MoveKind, usize>,
    /// Sampled R3 pairs whose three strands lie on three distinct components.
    pub three_component_r3: usize,
}

/// Default proportions for harvesting: R3 and base-point moves carry the
/// content, so they are over-represented.
pub fn default_solver_mix() -> MoveMix {
    MoveMix { r1_add: 0.5, r1_remove: 0.5, r2_add: 1.0, r2_remove: 1.0, r3: 4.0, base_point: 2.0 }
}

fn sample_one(seed: u64, mix: &MoveMix) -> Option<SampledPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crossings = rng.gen_range(6..=18);
    let mode = if rng.gen_bool(0.8) { RandomMode::Spliced } else { RandomMode::Trivial };
    let g = random_link_diagram(3, crossings, seed, mode).ok()?;
    let faces = Faces::new(&g);
    let small = removal_and_r3_sites(&g, &faces);
    let mut kinds: Vec<(MoveKind, f64)> = MoveKind::ALL.iter().map(|&k| (k, mix.weight(k))).filter(|k| k.1 > 0.0).collect();
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
        let site = if kind == MoveKind::R3 {
            let all: Vec<&MoveSite> = small.iter().filter(|s| s.kind() == MoveKind::R3).collect();
            let three: Vec<&MoveSite> = all.iter().copied().filter(|s| s.components().len() == 3).collect();
            let pool = if !three.is_empty() && rng.gen_bool(0.7) { three } else { all };
            pool.choose(&mut rng).map(|s| **s)
        } else {
            random_site_of_kind(&g, &faces, kind, &mut rng)
        };
        if let Some(site) = site {
            let after = apply_move(&g, &site).ok()?;
            return Some(SampledPair { before: g, after, site });
        }
        kinds.remove(pick);
    }
    None
}

/// Samples `count` move pairs from random three-component diagrams,
/// deterministic in `seed`, and returns their distinct relation rows.
pub fn sample_relations(seed: u64, count: usize, mix: &MoveMix) -> RelationSample {
    let pairs: Vec<(SampledPair, RelationRow)> = (0..count as u64)
        .into_par_iter()
        .filter_map(|i| {
            let pair = sample_one(derive_seed(seed, i), mix)?;
            let before = CellTable::compute(&pair.before).ok()?;
            let after = CellTable::compute(&pair.after).ok()?;
            let row = RelationRow::from_pair(&pair.site, &before, &after);
            Some((pair, row))
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = RelationSample { rows: Vec::new(), pairs: Vec::new(), counts: BTreeMap::new(), three_component_r3: 0 };
    for (pair, row) in pairs {
        *out.counts.entry(pair.site.kind()).or_default() += 1;
        if pair.site.kind() == MoveKind::R3 && row.components == 3 {
            out.three_component_r3 += 1;
        }
        if seen.insert(row.clone()) {
            out.rows.push(row);
        }
        out.pairs.push(pair);
    }
    out
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
fn rref(m: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row) {
                    *x = &*x - &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

fn to_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

/// Rank of a set of integer vectors, computed exactly.
pub fn rank(rows: &[Vec<i64>], cols: usize) -> usize {
    let mut m = to_matrix(rows);
    rref(&mut m, cols).len()
}

/// Scales a rational vector to the primitive integer vector on its line.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            out.iter_mut().for_each(|x| *x = -&*x);
        }
    }
    out
}

/// A basis of `{c ∈ Q^24 : row · c = 0 for every row}`, each vector scaled
/// to a primitive integer vector. Exact arithmetic throughout.
pub fn integer_nullspace(rows: &[RelationRow]) -> Vec<Vec<BigInt>> {
    nullspace_of(&rows.iter().map(|r| r.row.clone()).collect::<Vec<_>>(), 24)
}

/// Nullspace basis of an integer matrix with `cols` columns.
pub fn nullspace_of(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m = to_matrix(rows);
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            primitive(&v)
        })
        .collect()
}

/// Whether `c` lies in the rational span of `basis`.
pub fn check_membership(c: &CoefficientVector, basis: &[Vec<BigInt>]) -> bool {
    let target: Vec<BigRational> = c.flat().iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let mut m: Vec<Vec<BigRational>> =
        basis.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let before = rref(&mut m, 24).len();
    m.push(target);
    rref(&mut m, 24).len() == before
}

/// A basis vector as a coefficient vector, if its entries fit in `i64`.
pub fn basis_vector(v: &[BigInt]) -> Option<CoefficientVector> {
    let mut flat = [0i64; 24];
    for (x, b) in flat.iter_mut().zip(v) {
        *x = b.to_i64()?;
    }
    Some(CoefficientVector::from_flat(flat))
}
