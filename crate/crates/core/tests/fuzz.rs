mod common;

use trilink::{
    apply_move, is_realizable, observe, run_fuzz, CoefficientVector, Family, FuzzConfig, GaussDiagram, InvariantSel,
    Permutation,
};

#[test]
fn default_selection_passes() {
    let report = run_fuzz(&FuzzConfig { walks: 40, steps: 40, seed: 3, ..FuzzConfig::default() }).unwrap();
    assert!(report.passed(), "{:?}", report.violations.first());
    assert_eq!(report.walks, 40);
    assert!(report.moves > 1000);
    assert!(report.max_crossings_seen <= 30);
}

#[test]
fn fuzz_is_deterministic() {
    let config = FuzzConfig { walks: 16, steps: 30, seed: 11, ..FuzzConfig::default() };
    let a = run_fuzz(&config).unwrap();
    let b = run_fuzz(&config).unwrap();
    assert_eq!((a.moves, &a.moves_by_kind, a.three_component_r3), (b.moves, &b.moves_by_kind, b.three_component_r3));
}

#[test]
fn selection_names_round_trip() {
    for sel in InvariantSel::ALL {
        assert_eq!(sel.name().parse::<InvariantSel>().unwrap(), sel);
    }
    assert_eq!("FAMILYI".parse::<InvariantSel>().unwrap(), InvariantSel::FamilyI);
    assert!("bogus".parse::<InvariantSel>().is_err());
}

#[test]
fn observation_reports_errors_as_values() {
    let two = GaussDiagram::parse("O1+ U2+ ; U1+ O2+").unwrap();
    let obs = observe(&two, InvariantSel::FamilyI, None);
    assert!(obs.iter().any(|(_, v)| v.starts_with("error:")));
}

#[test]
fn single_cell_vector_is_caught_and_minimized() {
    let config = FuzzConfig {
        walks: 40,
        steps: 50,
        seed: 0,
        invariant: InvariantSel::Lk,
        custom: Some(CoefficientVector::unit(Family::RR, Permutation::IDENTITY)),
        ..FuzzConfig::default()
    };
    let report = run_fuzz(&config).unwrap();
    assert!(!report.passed());
    for v in report.violations.iter().take(5) {
        assert!(v.invariant.starts_with("custom"), "{}", v.invariant);
        assert_eq!(v.walk_codes.len(), v.step + 1);
        let m = &v.minimized;
        let before = GaussDiagram::parse(&m.before).unwrap();
        let after = GaussDiagram::parse(&m.after).unwrap();
        assert!(is_realizable(&before) && is_realizable(&after));
        assert_eq!(apply_move(&before, &m.site).unwrap(), after);
        let original = GaussDiagram::parse(&v.walk_codes[v.step - 1]).unwrap();
        assert!(m.crossings <= original.num_arrows());
        assert!(m.crossings <= 8, "minimized pair still has {} crossings", m.crossings);
        let custom = config.custom.as_ref();
        assert_ne!(observe(&before, InvariantSel::Lk, custom), observe(&after, InvariantSel::Lk, custom));
    }
}

#[test]
fn fixed_start_diagram() {
    let config = FuzzConfig { walks: 8, steps: 40, start: Some(common::borromean()), ..FuzzConfig::default() };
    let report = run_fuzz(&config).unwrap();
    assert!(report.passed());
    let mismatched = FuzzConfig { start: Some(GaussDiagram::unlink(2).unwrap()), ..config };
    assert!(run_fuzz(&mismatched).is_err());
}
