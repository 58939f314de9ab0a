mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilink::{End, Error, GaussDiagram, Permutation, Sign, Token};

/// A random (generally virtual) diagram: `n` arrows with endpoints
/// scattered over `m` components.
fn random_virtual(m: usize, n: usize, seed: u64) -> GaussDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tokens = Vec::new();
    for label in 1..=n as u64 {
        let sign = if rng.gen() { Sign::Pos } else { Sign::Neg };
        tokens.push(Token { end: End::Tail, label, sign });
        tokens.push(Token { end: End::Head, label, sign });
    }
    tokens.shuffle(&mut rng);
    let mut words = vec![Vec::new(); m];
    for t in tokens {
        words[rng.gen_range(0..m)].push(t);
    }
    GaussDiagram::from_tokens(&words).unwrap()
}

#[test]
fn empty_lines_parse_as_unlink() {
    let g = GaussDiagram::parse("\n\n\n").unwrap();
    assert_eq!(g.num_components(), 3);
    assert_eq!(g.num_arrows(), 0);
    assert_eq!(g, GaussDiagram::unlink(3).unwrap());
}

#[test]
fn positive_hopf_parses() {
    let g = GaussDiagram::parse("O1+ U2+ ; U1+ O2+").unwrap();
    assert_eq!(g.num_components(), 2);
    assert_eq!(g.num_arrows(), 2);
    assert!(g.arrows().iter().all(|a| a.sign == Sign::Pos));
}

#[test]
fn positive_kink_parses() {
    let g = GaussDiagram::parse("O1+ U1+").unwrap();
    assert_eq!((g.num_components(), g.num_arrows()), (1, 1));
    let a = g.arrow(0);
    assert_eq!((a.tail.component, a.tail.position, a.head.position), (0, 0, 1));
}

#[test]
fn comment_lines_are_skipped_and_comments_stripped() {
    let g = GaussDiagram::parse("# header\nO1+ U2+ # first\n# between\nU1+ O2+\n").unwrap();
    assert_eq!(g.num_components(), 2);
}

#[test]
fn syntax_error_reports_position() {
    match GaussDiagram::parse("O1+ U2+\nU1+ X2+") {
        Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 5)),
        other => panic!("expected syntax error, got {other:?}"),
    }
    assert!(matches!(GaussDiagram::parse("O1+ U1"), Err(Error::Syntax { .. })));
    assert!(matches!(GaussDiagram::parse("O+ U1+"), Err(Error::Syntax { .. })));
}

#[test]
fn label_errors_are_distinguished() {
    assert_eq!(GaussDiagram::parse("O1+"), Err(Error::LabelCount { label: 1, count: 1 }));
    assert_eq!(GaussDiagram::parse("O1+ U1+ U1+"), Err(Error::LabelCount { label: 1, count: 3 }));
    assert!(matches!(GaussDiagram::parse("O1+ O1+"), Err(Error::LabelKind { label: 1, .. })));
    assert_eq!(GaussDiagram::parse("O1+ U1-"), Err(Error::SignMismatch { label: 1 }));
    assert!(matches!(GaussDiagram::parse("O1+ U2+ U1+"), Err(Error::LabelCount { label: 2, count: 1 })));
}

#[test]
fn serialize_unlink_and_hopf() {
    assert_eq!(GaussDiagram::unlink(3).unwrap().to_code(), "\n\n\n");
    let hopf = GaussDiagram::parse("O7+ U3+ ; U7+ O3+").unwrap();
    assert_eq!(hopf.to_code(), "O1+ U2+\nU1+ O2+\n");
}

#[test]
fn canonical_labels_follow_first_occurrence() {
    let g = GaussDiagram::parse("U9- O4+ O9- U4+").unwrap();
    assert_eq!(g.to_code(), "U1- O2+ O1- U2+\n");
    assert!(g.is_canonical());
}

#[test]
fn json_round_trip() {
    let g = common::borromean();
    let back = GaussDiagram::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    let text = r#"{"components": [[{"kind":"O","label":5,"sign":1},{"kind":"U","label":8,"sign":-1}],
                                   [{"kind":"U","label":5,"sign":1},{"kind":"O","label":8,"sign":-1}]]}"#;
    assert_eq!(GaussDiagram::from_json(text).unwrap().to_code(), "O1+ U2-\nU1+ O2-\n");
    assert!(matches!(GaussDiagram::from_json("{\"components\": 3}"), Err(Error::Json(_))));
}

#[test]
fn identity_permutation_is_trivial() {
    let g = common::borromean();
    assert_eq!(g.permute_components(Permutation::IDENTITY).unwrap(), g);
}

#[test]
fn permutation_then_inverse_is_trivial() {
    for g in common::corpus(20, 16, 1) {
        for p in Permutation::ALL {
            let back = g.permute_components(p).unwrap().permute_components(p.inverse()).unwrap();
            assert_eq!(back.canonical(), g.canonical());
        }
    }
}

#[test]
fn borromean_cyclic_relabel_keeps_arrow_multiset() {
    let g = common::borromean();
    let p: Permutation = "231".parse().unwrap();
    let h = g.permute_components(p).unwrap();
    assert_eq!(h.num_arrows(), 6);
    let mut signs: Vec<i64> = g.arrows().iter().map(|a| a.sign.value()).collect();
    let mut signs_h: Vec<i64> = h.arrows().iter().map(|a| a.sign.value()).collect();
    signs.sort_unstable();
    signs_h.sort_unstable();
    assert_eq!(signs, signs_h);
    // New component r is old component p(r).
    for r in 0..3 {
        assert_eq!(h.component(r).len(), g.component(p.apply(r)).len());
    }
    assert!(GaussDiagram::unlink(2).unwrap().permute_components(p).is_err());
}

#[test]
fn reversal_and_mirror_are_involutions() {
    for g in common::corpus(20, 16, 2) {
        for c in 0..3 {
            assert_eq!(g.reverse_component(c).unwrap().reverse_component(c).unwrap().canonical(), g.canonical());
        }
        assert_eq!(g.mirror().mirror().canonical(), g.canonical());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_parse_round_trip(m in 1usize..5, n in 0usize..14, seed in any::<u64>()) {
        let g = random_virtual(m, n, seed);
        let text = g.to_code();
        let back = GaussDiagram::parse(&text).unwrap();
        prop_assert_eq!(&back, &g.canonical());
        prop_assert_eq!(back.to_code(), text);
        prop_assert_eq!(GaussDiagram::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn permutation_is_a_group_action(n in 0usize..12, seed in any::<u64>(), a in 0usize..6, b in 0usize..6) {
        let g = random_virtual(3, n, seed);
        let (p, q) = (Permutation::ALL[a], Permutation::ALL[b]);
        let two_steps = g.permute_components(p).unwrap().permute_components(q).unwrap();
        let one_step = g.permute_components(p.compose(q)).unwrap();
        prop_assert_eq!(two_steps.canonical(), one_step.canonical());
    }

    #[test]
    fn mutated_codes_are_rejected(n in 1usize..10, seed in any::<u64>(), pick in any::<prop::sample::Index>(), how in 0u8..3) {
        let g = random_virtual(3, n, seed);
        let mut words = g.to_tokens();
        let flat: Vec<(usize, usize)> =
            words.iter().enumerate().flat_map(|(c, w)| (0..w.len()).map(move |i| (c, i))).collect();
        let (c, i) = flat[pick.index(flat.len())];
        let label = words[c][i].label;
        let expected = match how {
            0 => {
                words[c].remove(i);
                Error::LabelCount { label, count: 1 }
            }
            1 => {
                words[c][i].sign = words[c][i].sign.flip();
                Error::SignMismatch { label }
            }
            _ => {
                words[c][i].end = words[c][i].end.other();
                Error::LabelKind { label, kind: words[c][i].end.letter() }
            }
        };
        let text: Vec<String> = words.iter().map(|w| w.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")).collect();
        prop_assert_eq!(GaussDiagram::parse(&text.join("\n")), Err(expected));
    }
}
