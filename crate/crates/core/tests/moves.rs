mod common;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trilink::{
    applicable_moves, apply_move, apply_move_tracked, catalog, linking_numbers, random_walk, random_walk_steps, Endpoint,
    Error, GaussDiagram, MoveKind, MoveMix, MoveSite,
};

fn kinds_of(g: &GaussDiagram) -> Vec<MoveKind> {
    let mut k: Vec<MoveKind> = applicable_moves(g).iter().map(|s| s.kind()).collect();
    k.sort_by_key(|k| k.name());
    k.dedup();
    k
}

fn inverse_kind(k: MoveKind) -> MoveKind {
    match k {
        MoveKind::R1Add => MoveKind::R1Remove,
        MoveKind::R1Remove => MoveKind::R1Add,
        MoveKind::R2Add => MoveKind::R2Remove,
        MoveKind::R2Remove => MoveKind::R2Add,
        MoveKind::R3 => MoveKind::R3,
        MoveKind::BasePoint => MoveKind::BasePoint,
    }
}

fn crossing_delta(k: MoveKind) -> isize {
    match k {
        MoveKind::R1Add => 1,
        MoveKind::R1Remove => -1,
        MoveKind::R2Add => 2,
        MoveKind::R2Remove => -2,
        MoveKind::R3 | MoveKind::BasePoint => 0,
    }
}

/// A sample of sites of every kind on a corpus diagram.
fn sampled_sites(g: &GaussDiagram, per_kind: usize, rng: &mut ChaCha8Rng) -> Vec<MoveSite> {
    let all = applicable_moves(g);
    let mut out = Vec::new();
    for k in MoveKind::ALL {
        let mut of_kind: Vec<MoveSite> = all.iter().copied().filter(|s| s.kind() == k).collect();
        of_kind.shuffle(rng);
        out.extend(of_kind.into_iter().take(per_kind));
    }
    out
}

#[test]
fn unlink_admits_only_additions() {
    let u = GaussDiagram::unlink(3).unwrap();
    assert_eq!(kinds_of(&u), vec![MoveKind::R1Add, MoveKind::R2Add]);
}

#[test]
fn kink_admits_removal() {
    let g = GaussDiagram::parse("O1+ U1+").unwrap();
    let removals: Vec<MoveSite> =
        applicable_moves(&g).into_iter().filter(|s| s.kind() == MoveKind::R1Remove).collect();
    assert_eq!(removals, vec![MoveSite::R1Remove { at: Endpoint { component: 0, position: 0 } }]);
    assert_eq!(apply_move(&g, &removals[0]).unwrap(), GaussDiagram::unlink(1).unwrap());
}

#[test]
fn bigon_admits_removal() {
    for code in ["O1+ O2- ; U1+ U2-", "O1+ O2- U2- U1+"] {
        let g = GaussDiagram::parse(code).unwrap();
        let removals: Vec<MoveSite> =
            applicable_moves(&g).into_iter().filter(|s| s.kind() == MoveKind::R2Remove).collect();
        assert_eq!(removals.len(), 1, "{code}");
        let empty = apply_move(&g, &removals[0]).unwrap();
        assert_eq!(empty.num_arrows(), 0);
        assert_eq!(empty.num_components(), g.num_components());
    }
}

#[test]
fn r2_add_on_unlink_keeps_linking_zero() {
    let u = GaussDiagram::unlink(3).unwrap();
    for site in applicable_moves(&u).into_iter().filter(|s| s.kind() == MoveKind::R2Add) {
        let g = apply_move(&u, &site).unwrap();
        assert_eq!(g.num_arrows(), 2);
        assert_ne!(g.arrow(0).sign, g.arrow(1).sign);
        assert_eq!(linking_numbers(&g).unwrap(), [0, 0, 0]);
    }
}

#[test]
fn r3_exchanges_endpoints_on_triangle() {
    let g = GaussDiagram::parse("O1+ O2+ ; U1+ O3+ ; U2+ U3+").unwrap();
    let r3: Vec<MoveSite> = applicable_moves(&g).into_iter().filter(|s| s.kind() == MoveKind::R3).collect();
    assert_eq!(r3.len(), 1);
    let h = apply_move(&g, &r3[0]).unwrap();
    assert_eq!(h, GaussDiagram::parse("O2+ O1+ ; O3+ U1+ ; U3+ U2+").unwrap());
    assert!(h.arrows().iter().all(|a| a.sign.value() == 1));
    assert_eq!(apply_move(&h, &applicable_moves(&h).into_iter().find(|s| s.kind() == MoveKind::R3).unwrap()).unwrap(), g);
}

#[test]
fn r3_on_corpus_swaps_three_adjacent_pairs() {
    let mut seen = 0;
    for g in common::corpus(40, 24, 15) {
        for site in applicable_moves(&g).into_iter().filter(|s| s.kind() == MoveKind::R3) {
            let MoveSite::R3 { top, middle, bottom, .. } = site else { unreachable!() };
            let r = apply_move_tracked(&g, &site).unwrap();
            assert_eq!(r.diagram.num_arrows(), g.num_arrows());
            let before = g.to_tokens();
            let after = r.diagram.to_tokens();
            for e in [top, middle, bottom] {
                let (c, p) = (e.component, e.position);
                let old = (before[c][p], before[c][p + 1]);
                let new = (after[c][p], after[c][p + 1]);
                // Same endpoints, exchanged; signs preserved.
                let relabel = |t: trilink::Token| (t.end, r.arrow_map[t.label as usize - 1].unwrap() as u64 + 1, t.sign);
                assert_eq!((relabel(old.0), relabel(old.1)), ((new.1.end, new.1.label, new.1.sign), (new.0.end, new.0.label, new.0.sign)));
            }
            seen += 1;
        }
    }
    assert!(seen > 20, "only {seen} R3 sites in the corpus");
}

#[test]
fn crossing_counts_and_locality() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in common::corpus(30, 20, 16) {
        for site in sampled_sites(&g, 4, &mut rng) {
            let r = apply_move_tracked(&g, &site).unwrap();
            let delta = r.diagram.num_arrows() as isize - g.num_arrows() as isize;
            assert_eq!(delta, crossing_delta(site.kind()), "{site}");
            let deleted = r.arrow_map.iter().filter(|m| m.is_none()).count();
            assert_eq!(deleted as isize, (-delta).max(0));
            for (old, new) in r.arrow_map.iter().enumerate() {
                let Some(new) = *new else { continue };
                let (a, b) = (g.arrow(old), r.diagram.arrow(new));
                assert_eq!(a.sign, b.sign);
                assert_eq!((a.tail.component, a.head.component), (b.tail.component, b.head.component));
            }
        }
    }
}

#[test]
fn untouched_components_are_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for g in common::corpus(30, 20, 17) {
        for site in sampled_sites(&g, 3, &mut rng) {
            let h = apply_move(&g, &site).unwrap();
            let involved = site.components();
            // Components the move does not touch see the same word up to labels.
            for c in (0..3).filter(|c| !involved.contains(c)) {
                let ends = |d: &GaussDiagram| -> Vec<(trilink::End, i64)> {
                    d.to_tokens()[c].iter().map(|t| (t.end, t.sign.value())).collect()
                };
                assert_eq!(ends(&g), ends(&h), "{site}");
            }
        }
    }
}

#[test]
fn every_move_has_an_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in common::corpus(24, 16, 18) {
        let target = g.canonical();
        for site in sampled_sites(&g, 3, &mut rng) {
            let h = apply_move(&g, &site).unwrap();
            let back = inverse_kind(site.kind());
            let found = applicable_moves(&h)
                .into_iter()
                .filter(|s| s.kind() == back)
                .any(|s| apply_move(&h, &s).map(|d| d.canonical() == target).unwrap_or(false));
            assert!(found, "no inverse for {site} on {}", g.to_code());
        }
    }
}

#[test]
fn r1_add_then_remove_round_trips() {
    let g = common::borromean();
    for site in applicable_moves(&g).into_iter().filter(|s| s.kind() == MoveKind::R1Add) {
        let MoveSite::R1Add { gap, .. } = site else { unreachable!() };
        let h = apply_move(&g, &site).unwrap();
        let remove = MoveSite::R1Remove { at: Endpoint { component: gap.component, position: gap.position } };
        assert_eq!(apply_move(&h, &remove).unwrap(), g, "{site}");
    }
}

#[test]
fn stale_sites_are_rejected() {
    let g = common::borromean();
    let stale = MoveSite::R1Remove { at: Endpoint { component: 0, position: 0 } };
    assert!(matches!(apply_move(&g, &stale), Err(Error::StaleSite(_))));
    let out_of_range = MoveSite::BasePoint { component: 5, forward: true };
    assert!(matches!(apply_move(&g, &out_of_range), Err(Error::StaleSite(_))));
    let empty = MoveSite::BasePoint { component: 0, forward: true };
    assert!(matches!(apply_move(&GaussDiagram::unlink(3).unwrap(), &empty), Err(Error::StaleSite(_))));
    let gone = MoveSite::R2Remove {
        over: Endpoint { component: 0, position: 0 },
        under: Endpoint { component: 1, position: 0 },
    };
    assert!(matches!(apply_move(&g, &gone), Err(Error::StaleSite(_))));
}

#[test]
fn walks_are_deterministic() {
    let g = catalog("hopf-unknot", &[]).unwrap();
    let a = random_walk(&g, 60, 42, 20);
    let b = random_walk(&g, 60, 42, 20);
    assert_eq!(a, b);
    assert_eq!(a.len(), 61);
    assert_ne!(a, random_walk(&g, 60, 43, 20));
    for d in &a {
        assert_eq!(linking_numbers(d).unwrap(), [1, 0, 0]);
        assert!(d.num_arrows() <= 20);
    }
    let steps = random_walk_steps(&g, 60, 42, 20, &MoveMix::default());
    for (i, s) in steps.iter().enumerate() {
        assert_eq!(apply_move(&a[i], &s.site).unwrap(), a[i + 1]);
    }
}

#[test]
fn zero_steps_return_the_start() {
    let g = common::borromean();
    assert_eq!(random_walk(&g, 0, 1, 30), vec![g]);
}

#[test]
fn additions_stop_at_the_crossing_cap() {
    let g = common::borromean();
    for d in random_walk(&g, 200, 7, 10) {
        assert!(d.num_arrows() <= 10);
    }
}

#[test]
fn move_mix_parsing() {
    let m = MoveMix::parse("r3=5,base_point=0").unwrap();
    assert_eq!(m.weight(MoveKind::R3), 5.0);
    assert_eq!(m.weight(MoveKind::BasePoint), 0.0);
    assert!(MoveMix::parse("r9=1").is_err());
    assert!(MoveMix::parse("r3=-1").is_err());
}
