//! Helpers shared by the integration tests.
#![allow(dead_code)]

use trilink::{random_link_diagram, GaussDiagram, Permutation, RandomMode};

/// An arrow as `(tail, head)`, each a `(role, rank on that role's circle)`.
pub type OracleArrow = ((usize, usize), (usize, usize));

/// An independent transcription of the four two-arrow patterns, written
/// directly as `(tail, head)` pairs of `(role, rank on that role's circle)`.
/// Kept separate from the shipped data file on purpose.
pub const ORACLE_PATTERNS: [(&str, [OracleArrow; 2]); 4] = [
    ("RR", [((0, 0), (1, 0)), ((1, 1), (2, 0))]),
    ("LL", [((1, 0), (0, 0)), ((2, 0), (1, 1))]),
    ("RL", [((0, 0), (1, 0)), ((2, 0), (1, 1))]),
    ("LR", [((1, 0), (0, 0)), ((1, 1), (2, 0))]),
];

/// Whether arrows `x`, `y` (in this order) realize oracle pattern `f` with
/// role `r` placed on component `sigma(r)`.
pub fn oracle_match(g: &GaussDiagram, f: usize, sigma: Permutation, x: usize, y: usize) -> bool {
    let mut on_circle: [Vec<(usize, usize)>; 3] = Default::default(); // (rank, position)
    for (&(tail, head), arrow) in ORACLE_PATTERNS[f].1.iter().zip([g.arrow(x), g.arrow(y)]) {
        for ((role, rank), end) in [(tail, arrow.tail), (head, arrow.head)] {
            if end.component != sigma.apply(role) {
                return false;
            }
            on_circle[role].push((rank, end.position));
        }
    }
    on_circle.iter_mut().all(|v| {
        v.sort_unstable();
        v.windows(2).all(|w| w[0].1 < w[1].1)
    })
}

/// Brute-force pairing table `[family][σ]`, straight from the definition.
pub fn oracle_cells(g: &GaussDiagram) -> [[i64; 6]; 4] {
    let mut t = [[0i64; 6]; 4];
    let n = g.num_arrows();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let s = g.arrow(x).sign.value() * g.arrow(y).sign.value();
            for (f, row) in t.iter_mut().enumerate() {
                for (k, &sigma) in Permutation::ALL.iter().enumerate() {
                    if oracle_match(g, f, sigma, x, y) {
                        row[k] += s;
                    }
                }
            }
        }
    }
    t
}

/// Brute-force f(c) with display weights `w[family][σ]` (sgn(σ) applied here).
pub fn oracle_eval(cells: &[[i64; 6]; 4], w: &[[i64; 6]; 4]) -> i64 {
    let mut s = 0;
    for f in 0..4 {
        for (k, sigma) in Permutation::ALL.iter().enumerate() {
            s += sigma.parity() * w[f][k] * cells[f][k];
        }
    }
    s
}

/// A deterministic corpus of realizable three-component diagrams.
pub fn corpus(count: usize, max_crossings: usize, seed: u64) -> Vec<GaussDiagram> {
    (0..count as u64)
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
            let mode = if i % 3 == 0 { RandomMode::Trivial } else { RandomMode::Spliced };
            random_link_diagram(3, (i as usize * 7) % (max_crossings + 1), s, mode).expect("three components")
        })
        .collect()
}

pub fn borromean() -> GaussDiagram {
    trilink::catalog("borromean", &[]).expect("shipped")
}
