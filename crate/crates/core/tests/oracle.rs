mod common;

use trilink::{milnor_mu123, CellTable, CoefficientVector, GaussDiagram, InvariantReport, Permutation, Residue};

const FIXTURE: &str = include_str!("fixtures/borromean-oracle.txt");

fn fixture_lines(prefix: &str) -> Vec<&'static str> {
    FIXTURE.lines().filter(|l| l.starts_with(prefix)).collect()
}

fn fixture_value(key: &str) -> i64 {
    let line = fixture_lines(key)[0];
    line[key.len()..].trim().parse().expect("integer")
}

fn listing(g: &GaussDiagram) -> Vec<String> {
    let n = g.num_arrows();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let s = g.arrow(x).sign.value() * g.arrow(y).sign.value();
            let mut cells = Vec::new();
            for (f, (name, _)) in common::ORACLE_PATTERNS.iter().enumerate() {
                for sigma in Permutation::ALL {
                    if common::oracle_match(g, f, sigma, x, y) {
                        cells.push(format!("{name}{sigma}/{}{}", x + 1, y + 1));
                    }
                    if common::oracle_match(g, f, sigma, y, x) {
                        cells.push(format!("{name}{sigma}/{}{}", y + 1, x + 1));
                    }
                }
            }
            let m = if cells.is_empty() { "-".to_string() } else { cells.join(" ") };
            out.push(format!("pair {} {} sign {s:+} matches {m}", x + 1, y + 1));
        }
    }
    out
}

fn fixture_diagram() -> GaussDiagram {
    let code = fixture_lines("code ")[0].trim_start_matches("code ");
    GaussDiagram::parse(code).expect("fixture code parses")
}

#[test]
fn fixture_code_is_the_shipped_borromean() {
    assert_eq!(fixture_diagram(), common::borromean());
}

#[test]
fn fifteen_subdiagrams_match_frozen_listing() {
    let got = listing(&fixture_diagram());
    let frozen: Vec<String> = fixture_lines("pair ").iter().map(|s| s.to_string()).collect();
    assert_eq!(got.len(), 15);
    assert_eq!(got, frozen);
}

#[test]
fn engine_cells_equal_oracle_and_fixture() {
    let g = fixture_diagram();
    let engine = CellTable::compute(&g).unwrap().0;
    assert_eq!(engine, common::oracle_cells(&g));
    for (f, name) in ["RR", "LL", "RL", "LR"].iter().enumerate() {
        let line = fixture_lines(&format!("cells {name} "))[0];
        let frozen: Vec<i64> = line.split_whitespace().skip(2).map(|x| x.parse().unwrap()).collect();
        assert_eq!(engine[f].to_vec(), frozen, "family {name}");
    }
}

#[test]
fn borromean_f2211_and_mu_are_frozen() {
    let g = fixture_diagram();
    let f = trilink::f_general(&CoefficientVector::fact_2211(), &g).unwrap();
    assert_eq!(f, fixture_value("f2211"));
    assert_eq!(f, 12);
    let w = [[2; 6], [2; 6], [1; 6], [1; 6]];
    assert_eq!(common::oracle_eval(&common::oracle_cells(&g), &w), 12);
    assert_eq!(milnor_mu123(&g).unwrap(), Residue::new(fixture_value("mu123"), 0));
}

#[test]
fn oracle_agrees_with_engine_on_random_corpus() {
    for g in common::corpus(60, 24, 5) {
        assert_eq!(CellTable::compute(&g).unwrap().0, common::oracle_cells(&g), "{}", g.to_code());
    }
}

#[test]
fn reversed_component_negates_mu() {
    let g = common::borromean();
    let base = InvariantReport::compute(&g).unwrap().mu123.value;
    for c in 0..3 {
        let r = InvariantReport::compute(&g.reverse_component(c).unwrap()).unwrap();
        assert_eq!(r.mu123.value, -base, "reversing component {}", c + 1);
    }
}
