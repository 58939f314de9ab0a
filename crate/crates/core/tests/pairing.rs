mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilink::{
    enumerate_subdiagrams, eval_combination, match_pattern, pairing, CellTable, CoefficientVector, Error, Family,
    GaussDiagram, PatternSet, Permutation,
};

/// The RR picture itself: circle 1 carries a tail, circle 2 a head then a
/// tail, circle 3 a head.
const RR_PICTURE: &str = "O1+ ; U1+ O2+ ; U2+";

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn random_vector(rng: &mut ChaCha8Rng) -> CoefficientVector {
    CoefficientVector::from_flat(std::array::from_fn(|_| rng.gen_range(-5..=5)))
}

#[test]
fn subdiagram_counts() {
    let empty = GaussDiagram::unlink(3).unwrap();
    assert_eq!(enumerate_subdiagrams(&empty, 2).count(), 0);
    let b = common::borromean();
    let all: Vec<Vec<usize>> = enumerate_subdiagrams(&b, 2).collect();
    assert_eq!(all.len(), 15);
    assert_eq!(all[0], vec![0, 1]);
    assert_eq!(all[14], vec![4, 5]);
    let four = GaussDiagram::parse("O1+ U2+ O3+ U4+ ; U1+ O2+ U3+ O4+ ;").unwrap();
    let zero: Vec<Vec<usize>> = enumerate_subdiagrams(&four, 0).collect();
    assert_eq!(zero, vec![Vec::<usize>::new()]);
    assert_eq!(enumerate_subdiagrams(&four, 5).count(), 0);
}

#[test]
fn subdiagram_counts_are_binomial_on_corpus() {
    for g in common::corpus(40, 30, 3) {
        let n = g.num_arrows();
        assert_eq!(enumerate_subdiagrams(&g, 2).count(), binom2(n));
        if n >= 3 {
            assert_eq!(enumerate_subdiagrams(&g, 3).count(), n * (n - 1) * (n - 2) / 6);
        }
    }
}

#[test]
fn pattern_matches_its_own_picture() {
    let patterns = PatternSet::shipped();
    let rr = patterns.get(Family::RR);
    let g = GaussDiagram::parse(RR_PICTURE).unwrap();
    assert!(match_pattern(rr, &[0, 1], &g, Permutation::IDENTITY));
    assert!(match_pattern(rr, &[1, 0], &g, Permutation::IDENTITY));
    for sigma in Permutation::ALL.into_iter().skip(1) {
        assert!(!match_pattern(rr, &[0, 1], &g, sigma), "binding {sigma}");
    }
    for f in [Family::LL, Family::RL, Family::LR] {
        assert!(!match_pattern(patterns.get(f), &[0, 1], &g, Permutation::IDENTITY), "{f}");
    }
}

#[test]
fn reversed_arrow_does_not_match() {
    let rr = PatternSet::shipped().get(Family::RR).clone();
    let g = GaussDiagram::parse("U1+ ; O1+ O2+ ; U2+").unwrap();
    assert!(!match_pattern(&rr, &[0, 1], &g, Permutation::IDENTITY));
    // With the first arrow reversed the picture is an LR diagram.
    assert!(match_pattern(PatternSet::shipped().get(Family::LR), &[0, 1], &g, Permutation::IDENTITY));
}

#[test]
fn two_component_pairs_never_match() {
    let g = GaussDiagram::parse("O1+ U2+ ; U1+ O2+ ;").unwrap();
    let patterns = PatternSet::shipped();
    for f in Family::ALL {
        for sigma in Permutation::ALL {
            assert!(!match_pattern(patterns.get(f), &[0, 1], &g, sigma));
        }
    }
    assert_eq!(CellTable::compute(&g).unwrap(), CellTable::default());
}

#[test]
fn invalid_selections_do_not_match() {
    let g = GaussDiagram::parse(RR_PICTURE).unwrap();
    let rr = PatternSet::shipped().get(Family::RR).clone();
    assert!(!match_pattern(&rr, &[0, 0], &g, Permutation::IDENTITY));
    assert!(!match_pattern(&rr, &[0], &g, Permutation::IDENTITY));
    assert!(!match_pattern(&rr, &[0, 7], &g, Permutation::IDENTITY));
}

#[test]
fn pairing_examples() {
    let patterns = PatternSet::shipped();
    let unlink = GaussDiagram::unlink(3).unwrap();
    for f in Family::ALL {
        for sigma in Permutation::ALL {
            assert_eq!(pairing(patterns.get(f), sigma, &unlink).unwrap(), 0);
        }
    }
    let rr = patterns.get(Family::RR);
    let g = GaussDiagram::parse(RR_PICTURE).unwrap();
    assert_eq!(pairing(rr, Permutation::IDENTITY, &g).unwrap(), 1);
    let h = GaussDiagram::parse("O1+ ; U1+ O2- ; U2-").unwrap();
    assert_eq!(pairing(rr, Permutation::IDENTITY, &h).unwrap(), -1);
    let two = GaussDiagram::parse("O1+ U2+ ; U1+ O2+").unwrap();
    assert!(matches!(pairing(rr, Permutation::IDENTITY, &two), Err(Error::ComponentCount { .. })));
}

#[test]
fn cell_table_agrees_with_single_pairings() {
    let patterns = PatternSet::shipped();
    for g in common::corpus(12, 20, 4) {
        let t = CellTable::compute(&g).unwrap();
        for f in Family::ALL {
            for sigma in Permutation::ALL {
                assert_eq!(t.get(f, sigma), pairing(patterns.get(f), sigma, &g).unwrap());
            }
        }
    }
}

#[test]
fn eval_examples() {
    let b = common::borromean();
    for g in common::corpus(20, 20, 6) {
        assert_eq!(eval_combination(&CoefficientVector::zero(), &g).unwrap(), 0);
    }
    assert_eq!(eval_combination(&CoefficientVector::fact_2211(), &b).unwrap().abs(), 12);
    assert_eq!(eval_combination(&CoefficientVector::fact_2211(), &b).unwrap() % 6, 0);
}

#[test]
fn completeness_bound() {
    for g in common::corpus(30, 30, 7) {
        let t = CellTable::compute(&g).unwrap();
        let total: i64 = t.flat().iter().map(|x| x.abs()).sum();
        assert!(total as usize <= 6 * binom2(g.num_arrows()));
    }
}

#[test]
fn large_diagram_parallel_path_matches_oracle() {
    // Enough arrows to take the multi-threaded path.
    let g = trilink::random_link_diagram(3, 420, 11, trilink::RandomMode::Spliced).unwrap();
    assert!(g.num_arrows() >= 384);
    assert_eq!(CellTable::compute(&g).unwrap().0, common::oracle_cells(&g));
}

#[test]
fn linearity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let corpus = common::corpus(100, 24, 8);
    for g in &corpus {
        let (c1, c2) = (random_vector(&mut rng), random_vector(&mut rng));
        let k = rng.gen_range(-4..=4);
        let e = |c: &CoefficientVector| eval_combination(c, g).unwrap();
        assert_eq!(e(&(c1 + c2)), e(&c1) + e(&c2));
        assert_eq!(e(&c1.scaled(k)), k * e(&c1));
        assert_eq!(e(&(c1 - c2)), e(&c1) - e(&c2));
    }
}

#[test]
fn lambda_scales_the_value() {
    let b = common::borromean();
    let mut c = CoefficientVector::fact_2211();
    c.lambda = 3;
    assert_eq!(eval_combination(&c, &b).unwrap(), 36);
}

#[test]
fn coefficient_text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mut c = random_vector(&mut rng);
        c.lambda = rng.gen_range(-3..=3);
        assert_eq!(CoefficientVector::parse(&c.to_text()).unwrap(), c);
    }
    assert!(matches!(CoefficientVector::parse("RR 123 1\nRR 123 2"), Err(Error::Coefficients { line: 2, .. })));
    assert!(matches!(CoefficientVector::parse("XX 123 1"), Err(Error::Coefficients { line: 1, .. })));
    assert!(matches!(CoefficientVector::parse("RR 124 1"), Err(Error::Coefficients { line: 1, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_independent_of_arrow_order(index in 0usize..40, seed in any::<u64>()) {
        let g = &common::corpus(40, 24, 9)[index];
        let mut order: Vec<usize> = (0..g.num_arrows()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permute_arrows(&order).unwrap();
        prop_assert_eq!(CellTable::compute(&h).unwrap(), CellTable::compute(g).unwrap());
    }
}
