use std::sync::OnceLock;

use num_bigint::BigInt;
use trilink::solver::{default_solver_mix, nullspace_of, rank, RelationSample};
use trilink::{
    check_membership, integer_nullspace, sample_relations, CellTable, CoefficientVector, Family, MoveKind, Permutation,
    RelationRow,
};

fn sample() -> &'static RelationSample {
    static S: OnceLock<RelationSample> = OnceLock::new();
    S.get_or_init(|| sample_relations(0, 600, &default_solver_mix()))
}

fn unit_row(i: usize) -> Vec<i64> {
    let mut r = vec![0; 24];
    r[i] = 1;
    r
}

#[test]
fn no_rows_leave_the_whole_space() {
    assert_eq!(nullspace_of(&[], 24).len(), 24);
    assert!(check_membership(&CoefficientVector::unit(Family::RR, Permutation::IDENTITY), &nullspace_of(&[], 24)));
}

#[test]
fn unit_rows_leave_nothing() {
    let rows: Vec<Vec<i64>> = (0..24).map(unit_row).collect();
    assert!(nullspace_of(&rows, 24).is_empty());
    assert_eq!(rank(&rows, 24), 24);
    assert!(check_membership(&CoefficientVector::zero(), &[]));
    assert!(!check_membership(&CoefficientVector::unit(Family::LL, Permutation::IDENTITY), &[]));
}

#[test]
fn nullspace_vectors_are_primitive_and_annihilate() {
    let rows = vec![vec![2, -4, 0, 6], vec![0, 3, 3, 0]];
    let basis = nullspace_of(&rows, 4);
    assert_eq!(basis.len(), 2);
    for v in &basis {
        for r in &rows {
            let dot: BigInt = r.iter().zip(v).map(|(a, b)| BigInt::from(*a) * b).sum();
            assert_eq!(dot, BigInt::from(0));
        }
        let g = v.iter().fold(BigInt::from(0), |acc, x| num_integer::Integer::gcd(&acc, x));
        assert_eq!(g, BigInt::from(1));
    }
}

#[test]
fn adding_rows_never_grows_the_nullspace() {
    let rows = &sample().rows;
    let mut last = 25;
    for k in [0, 5, 10, 20, rows.len()] {
        let dim = integer_nullspace(&rows[..k.min(rows.len())]).len();
        assert!(dim <= last);
        last = dim;
    }
}

#[test]
fn sample_covers_the_interesting_moves() {
    let s = sample();
    assert_eq!(s.pairs.len(), 600);
    assert!(s.counts.get(&MoveKind::R3).copied().unwrap_or(0) > 0);
    assert!(s.counts.get(&MoveKind::BasePoint).copied().unwrap_or(0) > 0);
    assert!(s.three_component_r3 > 0);
    assert!(s.rows.iter().any(|r| r.kind == MoveKind::R3 && r.components == 3 && !r.is_zero()));
    assert!(s.rows.iter().any(|r| r.kind == MoveKind::BasePoint && !r.is_zero()));
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_relations(9, 80, &default_solver_mix());
    let b = sample_relations(9, 80, &default_solver_mix());
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.counts, b.counts);
}

#[test]
fn kinks_give_zero_rows() {
    // An R1 kink has both endpoints on one component; no pattern pair can use it.
    for r in sample().rows.iter().filter(|r| matches!(r.kind, MoveKind::R1Add | MoveKind::R1Remove)) {
        assert!(r.is_zero());
    }
}

#[test]
fn families_are_in_the_nullspace_and_rr_is_not() {
    let basis = integer_nullspace(&sample().rows);
    for sigma in Permutation::ALL {
        assert!(check_membership(&CoefficientVector::family_i(sigma), &basis), "I at {sigma}");
        assert!(check_membership(&CoefficientVector::family_j(sigma), &basis), "J at {sigma}");
    }
    assert!(!check_membership(&CoefficientVector::unit(Family::RR, Permutation::IDENTITY), &basis));
    assert!(!check_membership(&CoefficientVector::fact_2211(), &basis));
}

#[test]
fn basis_annihilates_every_sampled_pair() {
    let basis = integer_nullspace(&sample().rows);
    for p in &sample().pairs {
        let row = RelationRow::from_pair(&p.site, &CellTable::compute(&p.before).unwrap(), &CellTable::compute(&p.after).unwrap());
        for v in &basis {
            let dot: BigInt = row.row.iter().zip(v).map(|(a, b)| BigInt::from(*a) * b).sum();
            assert_eq!(dot, BigInt::from(0));
        }
    }
}
