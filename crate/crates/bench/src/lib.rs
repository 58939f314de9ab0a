//! Shared fixtures for the criterion benchmarks in `benches/engine.rs`.

use trilink::{random_link_diagram, GaussDiagram, RandomMode};

/// A deterministic realizable three-component diagram with about `crossings` crossings.
pub fn fixture(crossings: usize, seed: u64) -> GaussDiagram {
    random_link_diagram(3, crossings, seed, RandomMode::Spliced).expect("three components")
}
