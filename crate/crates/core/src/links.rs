//! Reference links, random realizable diagrams, and the search for links
//! on which the first invariant family is nonzero while the triple linking
//! number vanishes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{End, GaussDiagram, Sign, Token};
use crate::error::{Error, Result};
use crate::invariants::{InvariantReport, Residue};
use crate::moves::{apply_move, random_move, MoveMix};

/// A braid generator: `σ_i` (`i ≥ 1`) when positive, `σ_i⁻¹` when negative.
pub type BraidWord = Vec<i32>;

/// Closure of a braid on `strands` strands. In `σ_i` the strand at position
/// `i` (from the left) passes over the strand at `i+1`; that crossing is
/// positive. Components are ordered by the leftmost bottom position they
/// pass through, and each base point sits at the bottom of that position.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<GaussDiagram> {
    if strands == 0 {
        return Err(Error::BadParameter("a braid needs at least one strand".into()));
    }
    // strand_at[p] = id of the strand currently at position p; strands are
    // identified by their bottom position.
    let mut strand_at: Vec<usize> = (0..strands).collect();
    let mut words: Vec<Vec<Token>> = vec![Vec::new(); strands];
    for (n, &g) in word.iter().enumerate() {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::BadParameter(format!("generator {g} is out of range for {strands} strands")));
        }
        let (l, r) = (strand_at[i - 1], strand_at[i]);
        let label = n as u64 + 1;
        let (sign, over, under) = if g > 0 { (Sign::Pos, l, r) } else { (Sign::Neg, r, l) };
        words[over].push(Token { end: End::Tail, label, sign });
        words[under].push(Token { end: End::Head, label, sign });
        strand_at.swap(i - 1, i);
    }
    // The strand that ends at top position p continues as strand p.
    let mut next = vec![0; strands];
    for (p, &s) in strand_at.iter().enumerate() {
        next[s] = p;
    }
    let mut done = vec![false; strands];
    let mut comps = Vec::new();
    for start in 0..strands {
        if done[start] {
            continue;
        }
        let mut w = Vec::new();
        let mut s = start;
        while !done[s] {
            done[s] = true;
            w.extend(words[s].iter().copied());
            s = next[s];
        }
        comps.push(w);
    }
    GaussDiagram::from_tokens(&comps)
}

/// The pure 3-braid generator `A_ij` (strand `i` going once around strand `j`).
pub fn pure_generator(i: usize, j: usize) -> BraidWord {
    match (i.min(j), i.max(j)) {
        (1, 2) => vec![1, 1],
        (2, 3) => vec![2, 2],
        (1, 3) => vec![2, 1, 1, -2],
        _ => panic!("pure generators are indexed by pairs of 1..=3"),
    }
}

/// The Borromean braid (σ1 σ2⁻¹)³.
pub fn borromean_braid() -> BraidWord {
    vec![1, -2, 1, -2, 1, -2]
}

pub fn inverse_braid(w: &[i32]) -> BraidWord {
    w.iter().rev().map(|g| -g).collect()
}

/// One documented expectation of a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Lk([i64; 3]),
    FamilyI(i64),
    FamilyJ(i64),
    Mu123(Residue),
    F2211(i64),
}

impl Expectation {
    /// Checks the expectation against a report; returns a message on mismatch.
    pub fn check(&self, r: &InvariantReport) -> std::result::Result<(), String> {
        let (ok, what, got) = match self {
            Expectation::Lk(v) => (r.lk == *v, format!("lk = {v:?}"), format!("{:?}", r.lk)),
            Expectation::FamilyI(v) => (r.family_i == *v, format!("familyI = {v}"), r.family_i.to_string()),
            Expectation::FamilyJ(v) => (r.family_j == *v, format!("familyJ = {v}"), r.family_j.to_string()),
            Expectation::Mu123(v) => (r.mu123 == *v, format!("mu123 = {v}"), r.mu123.to_string()),
            Expectation::F2211(v) => (r.f2211 == *v, format!("f2211 = {v}"), r.f2211.to_string()),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("expected {what}, computed {got}"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub diagram: GaussDiagram,
    /// The braid the diagram was closed from, when given that way.
    pub braid: Option<(usize, BraidWord)>,
    pub expectations: Vec<Expectation>,
}

impl CatalogEntry {
    /// Recomputes the invariants and checks every expectation.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let r = InvariantReport::compute(&self.diagram).map_err(|e| format!("{}: {e}", self.name))?;
        for e in &self.expectations {
            e.check(&r).map_err(|m| format!("{}: {m}", self.name))?;
        }
        Ok(())
    }
}

const CATALOG: &str = include_str!("../data/catalog-v1.txt");

pub fn catalog_text() -> &'static str {
    CATALOG
}

/// Parses a catalog file.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    let bad = |n: usize, m: String| Error::BadParameter(format!("catalog line {}: {m}", n + 1));
    let mut version = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("version") {
            if v.trim() != "1" {
                return Err(bad(n, format!("unsupported version `{}`", v.trim())));
            }
            version = true;
        } else if let Some(name) = line.strip_prefix("link ") {
            out.push(CatalogEntry {
                name: name.trim().to_string(),
                diagram: GaussDiagram::unlink(1)?,
                braid: None,
                expectations: Vec::new(),
            });
        } else {
            let entry = out.last_mut().ok_or_else(|| bad(n, "data before the first `link` line".into()))?;
            if let Some(code) = line.strip_prefix("code:") {
                entry.diagram = GaussDiagram::parse(code)?;
            } else if let Some(b) = line.strip_prefix("braid:") {
                let (s, w) = b.split_once(':').ok_or_else(|| bad(n, "expected `braid: <strands>: <word>`".into()))?;
                let strands: usize = s.trim().parse().map_err(|_| bad(n, format!("strand count `{}`", s.trim())))?;
                let word: BraidWord = w
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad(n, format!("generator `{t}`"))))
                    .collect::<Result<_>>()?;
                entry.diagram = braid_closure(strands, &word)?;
                entry.braid = Some((strands, word));
            } else if let Some(e) = line.strip_prefix("expect:") {
                entry.expectations.push(parse_expectation(e).map_err(|m| bad(n, m))?);
            } else {
                return Err(bad(n, format!("unrecognized line `{line}`")));
            }
        }
    }
    if !version {
        return Err(Error::BadParameter("catalog: missing `version 1` line".into()));
    }
    Ok(out)
}

fn parse_expectation(text: &str) -> std::result::Result<Expectation, String> {
    let (key, value) = text.split_once('=').ok_or("expected `<key> = <value>`")?;
    let ints = |s: &str| -> std::result::Result<Vec<i64>, String> {
        s.split_whitespace().filter(|t| *t != "mod").map(|t| t.parse().map_err(|_| format!("integer `{t}`"))).collect()
    };
    let v = ints(value)?;
    let one = || if v.len() == 1 { Ok(v[0]) } else { Err(format!("`{}` expects one integer", key.trim())) };
    Ok(match key.trim() {
        "lk" if v.len() == 3 => Expectation::Lk([v[0], v[1], v[2]]),
        "familyI" => Expectation::FamilyI(one()?),
        "familyJ" => Expectation::FamilyJ(one()?),
        "f2211" => Expectation::F2211(one()?),
        "mu123" if v.len() == 2 && v[1] >= 0 => Expectation::Mu123(Residue::new(v[0], v[1] as u64)),
        k => return Err(format!("bad expectation `{k} = {}`", value.trim())),
    })
}

/// The shipped catalog.
pub fn shipped_catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG).expect("shipped catalog parses")
}

/// Looks up a reference link. Parameterized names:
/// `unlink` (`[n]`, default 3) and `chain` (`[a, b]`: closure of
/// σ1^(2a) σ2^(2b), linking numbers a and b). The links `L2m+` / `L2m-` are
/// known only from figures that were not available, so they report
/// [`Error::Unavailable`].
pub fn catalog(name: &str, params: &[i64]) -> Result<GaussDiagram> {
    match name {
        "unlink" => {
            let n = params.first().copied().unwrap_or(3);
            if n < 1 || params.len() > 1 {
                return Err(Error::BadParameter("unlink takes one component count ≥ 1".into()));
            }
            GaussDiagram::unlink(n as usize)
        }
        "chain" => {
            let [a, b] = params else {
                return Err(Error::BadParameter("chain takes two linking numbers a, b".into()));
            };
            let mut w = Vec::new();
            w.extend(std::iter::repeat_n(a.signum() as i32, 2 * a.unsigned_abs() as usize));
            w.extend(std::iter::repeat_n(2 * b.signum() as i32, 2 * b.unsigned_abs() as usize));
            braid_closure(3, &w)
        }
        "L2m+" | "L2m-" => Err(Error::Unavailable {
            name: name.into(),
            reason: "the diagrams of this family were not available in legible form".into(),
        }),
        _ => {
            if !params.is_empty() {
                return Err(Error::BadParameter(format!("`{name}` takes no parameters")));
            }
            shipped_catalog()
                .into_iter()
                .find(|e| e.name == name)
                .map(|e| e.diagram)
                .ok_or_else(|| Error::UnknownLink(name.into()))
        }
    }
}

/// How [`random_link_diagram`] builds its diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RandomMode {
    /// Random moves applied to the unlink: always the trivial link.
    Trivial,
    /// Closure of a random product of Borromean and pure-braid clasp
    /// factors (three components only), then scrambled by moves.
    Spliced,
}

fn scramble(mut g: GaussDiagram, target: usize, shuffles: usize, rng: &mut ChaCha8Rng) -> GaussDiagram {
    let grow = MoveMix { r1_add: 1.0, r1_remove: 0.0, r2_add: 3.0, r2_remove: 0.0, r3: 2.0, base_point: 0.5 };
    let mut guard = 0;
    while g.num_arrows() < target && guard < 10 * target + 10 {
        guard += 1;
        let mut mix = grow;
        if g.num_arrows() + 2 > target {
            mix.r2_add = 0.0;
        }
        if let Some(site) = random_move(&g, &mix, true, rng) {
            g = apply_move(&g, &site).expect("sampled sites apply");
        }
    }
    let shuffle = MoveMix { r1_add: 0.0, r1_remove: 0.0, r2_add: 0.0, r2_remove: 0.0, r3: 3.0, base_point: 1.0 };
    for _ in 0..shuffles {
        match random_move(&g, &shuffle, false, rng) {
            Some(site) => g = apply_move(&g, &site).expect("sampled sites apply"),
            None => break,
        }
    }
    g
}

/// A random realizable diagram with about `crossings` crossings
/// (exactly `crossings` in trivial mode), deterministic in `seed`.
pub fn random_link_diagram(components: usize, crossings: usize, seed: u64, mode: RandomMode) -> Result<GaussDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        RandomMode::Trivial => {
            let g = GaussDiagram::unlink(components)?;
            Ok(scramble(g, crossings, crossings, &mut rng))
        }
        RandomMode::Spliced => {
            if components != 3 {
                return Err(Error::BadParameter("spliced random diagrams have three components".into()));
            }
            let mut word = BraidWord::new();
            let factors: [BraidWord; 8] = [
                borromean_braid(),
                inverse_braid(&borromean_braid()),
                pure_generator(1, 2),
                inverse_braid(&pure_generator(1, 2)),
                pure_generator(2, 3),
                inverse_braid(&pure_generator(2, 3)),
                pure_generator(1, 3),
                inverse_braid(&pure_generator(1, 3)),
            ];
            for _ in 0..8 {
                let f = factors.choose(&mut rng).expect("nonempty");
                if word.len() + f.len() > crossings {
                    continue;
                }
                word.extend_from_slice(f);
            }
            let g = braid_closure(3, &word)?;
            let n = g.num_arrows();
            Ok(scramble(g, crossings.max(n), crossings, &mut rng))
        }
    }
}

/// Splits a seed into independent per-index seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Which diagrams [`search_independent`] accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchMode {
    /// All linking numbers vanish, μ₁₂₃ = 0 and the first family is nonzero.
    Unlinked,
    /// μ₁₂₃ ≡ 0 modulo the linking gcd (any gcd) and the first family is nonzero.
    ResidueZero,
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub candidate: u64,
    pub diagram: GaussDiagram,
    pub family_i: i64,
    pub mu123: Residue,
    /// The predicate still held after 100 further random moves.
    pub reverified: bool,
}

/// Summary of a search run.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub hits: Vec<SearchHit>,
    pub candidates: u64,
    /// Candidates with all linking numbers zero.
    pub unlinked_candidates: u64,
    /// Largest |first family| seen on any candidate with linking gcd 0.
    pub max_family_i_unlinked: i64,
}

fn accepts(mode: SearchMode, r: &InvariantReport) -> bool {
    let gcd_ok = match mode {
        SearchMode::Unlinked => r.lk == [0, 0, 0],
        SearchMode::ResidueZero => true,
    };
    gcd_ok && r.mu123.is_zero() && r.family_i != 0
}

/// Tries `budget` random candidates with at most `bound` crossings.
/// Candidate `i` depends only on `(seed, i)`; hits are reported in
/// candidate order.
pub fn search_independent(bound: usize, budget: u64, seed: u64, mode: SearchMode) -> SearchOutcome {
    let results: Vec<(u64, GaussDiagram, InvariantReport)> = (0..budget)
        .into_par_iter()
        .filter_map(|i| {
            let s = derive_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let crossings = rng.gen_range(0..=bound);
            let mode = if rng.gen_bool(0.75) { RandomMode::Spliced } else { RandomMode::Trivial };
            let g = random_link_diagram(3, crossings, s, mode).ok()?;
            let r = InvariantReport::compute(&g).ok()?;
            Some((i, g, r))
        })
        .collect();
    let mut outcome =
        SearchOutcome { hits: Vec::new(), candidates: budget, unlinked_candidates: 0, max_family_i_unlinked: 0 };
    for (i, g, r) in results {
        if r.lk == [0, 0, 0] {
            outcome.unlinked_candidates += 1;
            outcome.max_family_i_unlinked = outcome.max_family_i_unlinked.max(r.family_i.abs());
        }
        if accepts(mode, &r) {
            let reverified = reverify(&g, mode, derive_seed(seed ^ 0x5EED, i), bound + 10);
            outcome.hits.push(SearchHit { candidate: i, diagram: g, family_i: r.family_i, mu123: r.mu123, reverified });
        }
    }
    outcome
}

fn reverify(g: &GaussDiagram, mode: SearchMode, seed: u64, max_crossings: usize) -> bool {
    let walk = crate::moves::random_walk(g, 100, seed, max_crossings);
    walk.iter().all(|d| InvariantReport::compute(d).map(|r| accepts(mode, &r)).unwrap_or(false))
}
