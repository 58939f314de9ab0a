//! Gauss-diagram invariants of ordered three-component links.
//!
//! The crate evaluates two-arrow formulas on based Gauss diagrams, computes
//! linking numbers, two families of link-homotopy invariants and Milnor's
//! triple linking number, and checks invariance with a Reidemeister move
//! engine that works directly on Gauss diagrams.

pub mod diagram;
pub mod error;
pub mod faces;
pub mod fuzz;
pub mod ingest;
pub mod invariants;
pub mod links;
pub mod moves;
pub mod pairing;
pub mod pattern;
pub mod perm;
pub mod solver;

pub use diagram::{Arrow, End, Endpoint, GaussDiagram, Sign, Slot, Token};
pub use error::{Error, Result};
pub use invariants::{
    family_i, family_i_at, family_j, family_j_at, f_general, linking_gcd, linking_number, linking_numbers,
    milnor_mu123, InvariantReport, Residue,
};
pub use pairing::{enumerate_subdiagrams, eval_combination, match_pattern, pairing, CellTable, CoefficientVector};
pub use pattern::{ArrowPattern, Convention, Family, PatternSet};
pub use perm::Permutation;
pub use fuzz::{observe, run_fuzz, FuzzConfig, FuzzReport, InvariantSel, Violation};
pub use ingest::{borromean_ellipses, pd_to_gauss, project, PdCode, Polyline3};
pub use faces::{is_realizable, Faces};
pub use moves::{
    applicable_moves, apply_move, apply_move_tracked, random_move, random_walk, random_walk_steps, Gap, MoveKind,
    MoveMix, MoveResult, MoveSite, R3Variant, WalkStep,
};
pub use links::{
    braid_closure, catalog, random_link_diagram, search_independent, shipped_catalog, CatalogEntry, RandomMode,
    SearchHit, SearchMode, SearchOutcome,
};
pub use solver::{check_membership, integer_nullspace, sample_relations, RelationRow, RelationSample};
