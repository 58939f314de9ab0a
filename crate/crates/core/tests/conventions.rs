mod common;

use trilink::{random_walk, CellTable, CoefficientVector, Convention, Family, PatternSet, Permutation};

fn families(patterns: &PatternSet, g: &trilink::GaussDiagram) -> Vec<i64> {
    let cells = CellTable::compute_with(patterns, g).unwrap();
    Permutation::ALL
        .iter()
        .flat_map(|&s| [CoefficientVector::family_i(s).eval_cells(&cells), CoefficientVector::family_j(s).eval_cells(&cells)])
        .collect()
}

#[test]
fn shipped_text_parses_back() {
    let shipped = PatternSet::shipped();
    assert_eq!(PatternSet::parse(&shipped.to_text()).unwrap(), shipped);
    assert_eq!(PatternSet::parse(PatternSet::shipped_text()).unwrap(), shipped);
    assert_eq!(PatternSet::variant(Convention::Shipped), shipped);
}

#[test]
fn variants_differ_from_the_shipped_transcription() {
    let shipped = PatternSet::shipped();
    for c in [Convention::ReversedArrows, Convention::MirroredOrder, Convention::ReversedMirrored] {
        let v = PatternSet::variant(c);
        assert!(Family::ALL.iter().any(|&f| v.get(f) != shipped.get(f)), "{c:?}");
    }
}

#[test]
fn every_convention_keeps_the_families_invariant() {
    for c in Convention::ALL {
        let patterns = PatternSet::variant(c);
        for (i, g) in common::corpus(24, 18, 19).into_iter().enumerate() {
            let start = families(&patterns, &g);
            for d in random_walk(&g, 40, i as u64, 30) {
                assert_eq!(families(&patterns, &d), start, "{c:?} on {}", g.to_code());
            }
        }
    }
}

#[test]
fn fact_holds_for_every_convention() {
    // The divisibility by 6 holds for all four readings; the mirrored
    // readings flip the sign of the Borromean value.
    let fact = CoefficientVector::fact_2211();
    let b = common::borromean();
    for c in Convention::ALL {
        let patterns = PatternSet::variant(c);
        for g in common::corpus(60, 24, 20) {
            assert_eq!(fact.eval_cells(&CellTable::compute_with(&patterns, &g).unwrap()) % 6, 0, "{c:?}");
        }
        let value = fact.eval_cells(&CellTable::compute_with(&patterns, &b).unwrap());
        let expected = match c {
            Convention::Shipped | Convention::ReversedArrows => 12,
            Convention::MirroredOrder | Convention::ReversedMirrored => -12,
        };
        assert_eq!(value, expected, "{c:?}");
    }
}
