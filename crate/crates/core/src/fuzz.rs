//! Move-invariance fuzzing: random walks over random diagrams, checking that
//! chosen invariants stay exactly constant, with counterexample shrinking.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::GaussDiagram;
use crate::error::{Error, Result};
use crate::faces::is_realizable;
use crate::invariants::{linking_numbers, InvariantReport};
use crate::links::{derive_seed, random_link_diagram, RandomMode};
use crate::moves::{applicable_moves, apply_move, apply_move_tracked, random_walk_steps, MoveKind, MoveMix, MoveSite};
use crate::pairing::{CellTable, CoefficientVector};

/// Which quantities a fuzz run watches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantSel {
    #[serde(rename = "familyI")]
    FamilyI,
    #[serde(rename = "familyJ")]
    FamilyJ,
    #[serde(rename = "mu123")]
    Mu123,
    #[serde(rename = "lk")]
    Lk,
    #[serde(rename = "all")]
    All,
}

impl InvariantSel {
    pub const ALL: [InvariantSel; 5] =
        [InvariantSel::FamilyI, InvariantSel::FamilyJ, InvariantSel::Mu123, InvariantSel::Lk, InvariantSel::All];

    pub fn name(self) -> &'static str {
        match self {
            InvariantSel::FamilyI => "familyI",
            InvariantSel::FamilyJ => "familyJ",
            InvariantSel::Mu123 => "mu123",
            InvariantSel::Lk => "lk",
            InvariantSel::All => "all",
        }
    }

    fn watches(self, name: &str) -> bool {
        self == InvariantSel::All || self.name() == name
    }
}

impl fmt::Display for InvariantSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InvariantSel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InvariantSel::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadParameter(format!("unknown invariant `{s}` (familyI, familyJ, mu123, lk, all)")))
    }
}

/// Named observed values of one diagram; errors are observed as values too,
/// so a diagram on which an invariant stops being computable is a violation.
pub type Observation = Vec<(String, String)>;

/// Evaluates the watched quantities on `g`. `extra`, when given, is an
/// additional coefficient vector watched under the name `custom`.
pub fn observe(g: &GaussDiagram, sel: InvariantSel, extra: Option<&CoefficientVector>) -> Observation {
    let mut out = Vec::new();
    if sel.watches("lk") {
        let v = match linking_numbers(g) {
            Ok(lk) => format!("{lk:?}"),
            Err(e) => format!("error: {e}"),
        };
        out.push(("lk".to_string(), v));
    }
    if sel != InvariantSel::Lk {
        match InvariantReport::compute(g) {
            Ok(r) => {
                if sel.watches("familyI") {
                    out.push(("familyI".into(), r.family_i.to_string()));
                }
                if sel.watches("familyJ") {
                    out.push(("familyJ".into(), r.family_j.to_string()));
                }
                if sel.watches("mu123") {
                    out.push(("mu123".into(), r.mu123.to_string()));
                }
            }
            Err(e) => {
                for name in ["familyI", "familyJ", "mu123"] {
                    if sel.watches(name) {
                        out.push((name.into(), format!("error: {e}")));
                    }
                }
            }
        }
    }
    if let Some(c) = extra {
        let v = match CellTable::compute(g) {
            Ok(cells) => c.eval_cells(&cells).to_string(),
            Err(e) => format!("error: {e}"),
        };
        out.push(("custom".into(), v));
    }
    out
}

fn first_difference(a: &Observation, b: &Observation) -> Option<(String, String, String)> {
    a.iter().zip(b).find(|(x, y)| x.1 != y.1).map(|(x, y)| (x.0.clone(), x.1.clone(), y.1.clone()))
}

/// Parameters of a fuzz run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub walks: usize,
    pub steps: usize,
    pub seed: u64,
    pub max_crossings: usize,
    /// Crossing count of randomly generated start diagrams is drawn from `0..=start_crossings`.
    pub start_crossings: usize,
    pub invariant: InvariantSel,
    pub mix: MoveMix,
    /// Fixed start diagram; random trivial/spliced diagrams when `None`.
    pub start: Option<GaussDiagram>,
    /// An extra coefficient vector to watch.
    pub custom: Option<CoefficientVector>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            walks: 100,
            steps: 50,
            seed: 0,
            max_crossings: 30,
            start_crossings: 20,
            invariant: InvariantSel::All,
            mix: MoveMix::default(),
            start: None,
            custom: None,
        }
    }
}

/// One invariance violation, with the walk that exposed it and a shrunk
/// single-move reproduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub walk: usize,
    /// 1-based index of the offending move within the walk.
    pub step: usize,
    pub invariant: String,
    pub before: String,
    pub after: String,
    /// Start diagram followed by every diagram up to and including the first violation.
    pub walk_codes: Vec<String>,
    pub moves: Vec<MoveSite>,
    pub minimized: MinimizedPair,
}

/// A single move whose two sides disagree on the watched invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimizedPair {
    pub before: String,
    pub after: String,
    pub site: MoveSite,
    pub crossings: usize,
}

/// Summary of a fuzz run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzReport {
    pub walks: usize,
    pub moves: usize,
    pub moves_by_kind: BTreeMap<String, usize>,
    pub three_component_r3: usize,
    pub max_crossings_seen: usize,
    pub violations: Vec<Violation>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The start diagram of walk `w`: a quarter trivial-mode, the rest spliced.
pub fn walk_start(config: &FuzzConfig, w: usize) -> Result<GaussDiagram> {
    if let Some(g) = &config.start {
        g.require_components(3)?;
        return Ok(g.clone());
    }
    let seed = derive_seed(config.seed, w as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crossings = rng.gen_range(0..=config.start_crossings.min(config.max_crossings));
    let mode = if w.is_multiple_of(4) { RandomMode::Trivial } else { RandomMode::Spliced };
    random_link_diagram(3, crossings, seed, mode)
}

struct WalkOutcome {
    moves: Vec<MoveKind>,
    three_component_r3: usize,
    max_crossings: usize,
    violation: Option<Violation>,
}

fn run_walk(config: &FuzzConfig, w: usize) -> Result<WalkOutcome> {
    let start = walk_start(config, w)?;
    let walk_seed = derive_seed(derive_seed(config.seed, w as u64), u64::MAX);
    let steps = random_walk_steps(&start, config.steps, walk_seed, config.max_crossings, &config.mix);
    let watch = |g: &GaussDiagram| observe(g, config.invariant, config.custom.as_ref());
    let mut previous = watch(&start);
    let mut out = WalkOutcome {
        moves: Vec::new(),
        three_component_r3: 0,
        max_crossings: start.num_arrows(),
        violation: None,
    };
    let mut before = start.clone();
    for (i, step) in steps.iter().enumerate() {
        out.moves.push(step.site.kind());
        if step.site.kind() == MoveKind::R3 && step.site.components().len() == 3 {
            out.three_component_r3 += 1;
        }
        out.max_crossings = out.max_crossings.max(step.diagram.num_arrows());
        let current = watch(&step.diagram);
        if let Some((invariant, b, a)) = first_difference(&previous, &current) {
            let mut walk_codes = vec![start.to_code()];
            walk_codes.extend(steps[..=i].iter().map(|s| s.diagram.to_code()));
            let minimized = minimize(&before, &step.site, config.invariant, config.custom.as_ref());
            out.violation = Some(Violation {
                walk: w,
                step: i + 1,
                invariant,
                before: b,
                after: a,
                walk_codes,
                moves: steps[..=i].iter().map(|s| s.site).collect(),
                minimized,
            });
            break;
        }
        previous = current;
        before = step.diagram.clone();
    }
    Ok(out)
}

/// Runs `config.walks` independent walks in parallel. Results are assembled
/// in walk order, so the report is deterministic in the configuration.
pub fn run_fuzz(config: &FuzzConfig) -> Result<FuzzReport> {
    let outcomes: Vec<WalkOutcome> =
        (0..config.walks).into_par_iter().map(|w| run_walk(config, w)).collect::<Result<_>>()?;
    let mut report = FuzzReport {
        walks: config.walks,
        moves: 0,
        moves_by_kind: MoveKind::ALL.iter().map(|k| (k.name().to_string(), 0)).collect(),
        three_component_r3: 0,
        max_crossings_seen: 0,
        violations: Vec::new(),
    };
    for o in outcomes {
        report.moves += o.moves.len();
        for k in o.moves {
            *report.moves_by_kind.entry(k.name().to_string()).or_default() += 1;
        }
        report.three_component_r3 += o.three_component_r3;
        report.max_crossings_seen = report.max_crossings_seen.max(o.max_crossings);
        report.violations.extend(o.violation);
    }
    Ok(report)
}

fn disagree(a: &GaussDiagram, b: &GaussDiagram, sel: InvariantSel, extra: Option<&CoefficientVector>) -> bool {
    first_difference(&observe(a, sel, extra), &observe(b, sel, extra)).is_some()
}

/// Shrinks a violating move: repeatedly deletes one arrow (or, failing
/// that, two arrows) the move does not delete from both sides, keeping the
/// result only if both sides stay realizable, stay exactly one move apart,
/// and still disagree.
pub fn minimize(before: &GaussDiagram, site: &MoveSite, sel: InvariantSel, extra: Option<&CoefficientVector>) -> MinimizedPair {
    let mut g = before.clone();
    let mut s = *site;
    'shrink: loop {
        let tracked = apply_move_tracked(&g, &s).expect("site stays applicable");
        let kept: Vec<(usize, usize)> =
            (0..g.num_arrows()).filter_map(|a| tracked.arrow_map[a].map(|m| (a, m))).collect();
        let singles = kept.iter().map(|&x| vec![x]);
        let pairs = kept.iter().enumerate().flat_map(|(i, &x)| kept[i + 1..].iter().map(move |&y| vec![x, y]));
        for group in singles.chain(pairs) {
            let old: Vec<usize> = group.iter().map(|p| p.0).collect();
            let new: Vec<usize> = group.iter().map(|p| p.1).collect();
            let smaller = g.without_arrows(&old);
            let smaller_after = tracked.diagram.without_arrows(&new);
            if !is_realizable(&smaller) || !is_realizable(&smaller_after) {
                continue;
            }
            if !disagree(&smaller, &smaller_after, sel, extra) {
                continue;
            }
            let target = smaller_after.canonical();
            let found = applicable_moves(&smaller)
                .into_iter()
                .find(|t| t.kind() == s.kind() && apply_move(&smaller, t).is_ok_and(|r| r.canonical() == target));
            if let Some(found) = found {
                g = smaller;
                s = found;
                continue 'shrink;
            }
        }
        break;
    }
    let after = apply_move(&g, &s).expect("minimized site applies");
    MinimizedPair { before: g.to_code(), after: after.to_code(), site: s, crossings: g.num_arrows() }
}
