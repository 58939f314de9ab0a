//! Subcommand implementations. Each returns the process exit status.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use trilink::links::derive_seed;
use trilink::pairing::CoefficientVector;
use trilink::solver::{basis_vector, default_solver_mix, rank};
use trilink::{
    catalog as catalog_link, check_membership, f_general, integer_nullspace, pd_to_gauss, run_fuzz,
    sample_relations, search_independent, shipped_catalog, CellTable, Error, Family, FuzzConfig, GaussDiagram,
    InvariantReport, InvariantSel, MoveMix, PdCode, Permutation, Polyline3, RandomMode, Residue, SearchMode,
};

use crate::output::{emit, to_csv, to_json, OutputFormat};
use crate::{
    CatalogArgs, Command, ComputeArgs, FuzzArgs, GenerateArgs, GenerateMode, IngestArgs, IngestFormat, InputFormat,
    RunConfig, SearchArgs, SearchModeArg, SolveArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

/// Errors that mean the library's own guarantees failed map to 4;
/// everything else is a problem with the input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotDivisibleBySix { .. }
        | Error::TripleLinkingMismatch { .. }
        | Error::Invalid(_)
        | Error::StaleSite(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

pub fn has_positionals(c: &Command) -> bool {
    match c {
        Command::Compute(a) => !a.inputs.is_empty(),
        Command::Catalog(a) => a.name.is_some(),
        _ => false,
    }
}

fn fail(context: &str, e: &Error) -> u8 {
    eprintln!("error: {context}: {e}");
    exit_code(e)
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn parse_diagram(text: &str, json: bool) -> trilink::Result<GaussDiagram> {
    if json {
        GaussDiagram::from_json(text)
    } else {
        GaussDiagram::parse(text)
    }
}

/// `name` or `name:p1,p2`.
fn catalog_spec(spec: &str) -> trilink::Result<GaussDiagram> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => {
            let params = p
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::BadParameter(format!("catalog parameter `{x}`"))))
                .collect::<trilink::Result<Vec<_>>>()?;
            (n, params)
        }
        None => (spec, Vec::new()),
    };
    catalog_link(name, &params)
}

fn read_coefficients(path: &Path) -> Result<CoefficientVector, (String, u8)> {
    let text = std::fs::read_to_string(path).map_err(|e| (format!("{}: {e}", path.display()), EXIT_INPUT))?;
    CoefficientVector::parse(&text).map_err(|e| (format!("{}: {e}", path.display()), exit_code(&e)))
}

#[derive(Serialize)]
struct MuJson {
    value: i64,
    #[serde(rename = "mod")]
    modulus: u64,
}

impl From<Residue> for MuJson {
    fn from(r: Residue) -> Self {
        MuJson { value: r.value, modulus: r.modulus }
    }
}

#[derive(Serialize)]
struct ComputeRow {
    input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lk: Option<[i64; 3]>,
    #[serde(rename = "familyI", skip_serializing_if = "Option::is_none")]
    family_i: Option<i64>,
    #[serde(rename = "familyJ", skip_serializing_if = "Option::is_none")]
    family_j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu123: Option<MuJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f2211: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    custom: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl ComputeRow {
    fn failed(input: String, message: String) -> Self {
        ComputeRow {
            input,
            crossings: None,
            lk: None,
            family_i: None,
            family_j: None,
            mu123: None,
            f2211: None,
            custom: None,
            error: Some(message),
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a RunConfig<'a>,
    #[serde(flatten)]
    body: T,
}

pub fn compute(a: &ComputeArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    let custom = match &a.coefficients {
        Some(p) => match read_coefficients(p) {
            Ok(c) => Some(c),
            Err((m, code)) => {
                eprintln!("error: {m}");
                return code;
            }
        },
        None => None,
    };
    let mut inputs: Vec<(String, trilink::Result<GaussDiagram>)> = Vec::new();
    let mut status = EXIT_OK;
    let mut files = a.inputs.clone();
    if files.is_empty() && a.code.is_empty() && a.catalog.is_empty() {
        files.push("-".into());
    }
    for f in &files {
        match read_input(f) {
            Ok(text) => {
                let json = match a.input_format {
                    InputFormat::Json => true,
                    InputFormat::Gauss => false,
                    InputFormat::Auto => f.ends_with(".json") || text.trim_start().starts_with('{'),
                };
                inputs.push((f.clone(), parse_diagram(&text, json)));
            }
            Err(m) => {
                eprintln!("error: {m}");
                return EXIT_INPUT;
            }
        }
    }
    for (i, c) in a.code.iter().enumerate() {
        inputs.push((format!("code[{}]", i + 1), GaussDiagram::parse(c)));
    }
    for c in &a.catalog {
        inputs.push((format!("catalog:{c}"), catalog_spec(c)));
    }
    let mut rows = Vec::new();
    for (name, g) in inputs {
        let row = match g.and_then(|g| {
            let r = InvariantReport::compute(&g)?;
            let c = custom.as_ref().map(|c| f_general(c, &g)).transpose()?;
            Ok((g.num_arrows(), r, c))
        }) {
            Ok((n, r, c)) => ComputeRow {
                input: name,
                crossings: Some(n),
                lk: Some(r.lk),
                family_i: Some(a.lambda * r.family_i),
                family_j: Some(a.lambda * r.family_j),
                mu123: Some(r.mu123.into()),
                f2211: Some(r.f2211),
                custom: c,
                error: None,
            },
            Err(e) => {
                status = status.max(fail(&name, &e));
                ComputeRow::failed(name, e.to_string())
            }
        };
        rows.push(row);
    }
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                results: Vec<ComputeRow>,
            }
            to_json(&Report { config, body: Body { results: rows } })
        }
        OutputFormat::Csv => {
            let header = [
                "input", "crossings", "lk12", "lk13", "lk23", "familyI", "familyJ", "mu123", "mod", "f2211", "custom",
                "error",
            ];
            let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let lk = r.lk.map(|l| l.map(|x| x.to_string())).unwrap_or_default();
                    vec![
                        r.input.clone(),
                        r.crossings.map(|n| n.to_string()).unwrap_or_default(),
                        lk[0].clone(),
                        lk[1].clone(),
                        lk[2].clone(),
                        opt(r.family_i),
                        opt(r.family_j),
                        opt(r.mu123.as_ref().map(|m| m.value)),
                        r.mu123.as_ref().map(|m| m.modulus.to_string()).unwrap_or_default(),
                        opt(r.f2211),
                        opt(r.custom),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            to_csv(&header, &table)
        }
        OutputFormat::Text => rows
            .iter()
            .map(|r| match &r.error {
                Some(e) => format!("{}: error: {e}\n", r.input),
                None => {
                    let mu = r.mu123.as_ref().expect("present without error");
                    let mut line = format!(
                        "{}: crossings={} lk={:?} familyI={} familyJ={} mu123={} f2211={}",
                        r.input,
                        r.crossings.unwrap_or(0),
                        r.lk.unwrap_or_default(),
                        r.family_i.unwrap_or(0),
                        r.family_j.unwrap_or(0),
                        Residue::new(mu.value, mu.modulus),
                        r.f2211.unwrap_or(0)
                    );
                    if let Some(c) = r.custom {
                        line.push_str(&format!(" custom={c}"));
                    }
                    line + "\n"
                }
            })
            .collect(),
    };
    emit(&text);
    status
}

pub fn fuzz(a: &FuzzArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    let invariant: InvariantSel = match a.invariant.parse() {
        Ok(x) => x,
        Err(e) => return fail("--invariant", &e),
    };
    let mix = match a.mix.as_deref().map(MoveMix::parse).transpose() {
        Ok(m) => m.unwrap_or_default(),
        Err(e) => return fail("--mix", &e),
    };
    let start = if let Some(path) = &a.input {
        let text = match read_input(path) {
            Ok(t) => t,
            Err(m) => {
                eprintln!("error: {m}");
                return EXIT_INPUT;
            }
        };
        match parse_diagram(&text, path.ends_with(".json")) {
            Ok(g) => Some(g),
            Err(e) => return fail(path, &e),
        }
    } else if let Some(spec) = &a.catalog {
        match catalog_spec(spec) {
            Ok(g) => Some(g),
            Err(e) => return fail(spec, &e),
        }
    } else {
        None
    };
    if let Some(g) = &start {
        if let Err(e) = g.require_components(3) {
            return fail("start diagram", &e);
        }
    }
    let custom = match &a.coefficients {
        Some(p) => match read_coefficients(p) {
            Ok(c) => Some(c),
            Err((m, code)) => {
                eprintln!("error: {m}");
                return code;
            }
        },
        None => None,
    };
    let fc = FuzzConfig {
        walks: a.walks,
        steps: a.steps,
        seed: a.seed,
        max_crossings: a.max_crossings,
        start_crossings: a.start_crossings,
        invariant,
        mix,
        start,
        custom,
    };
    let report = match run_fuzz(&fc) {
        Ok(r) => r,
        Err(e) => return fail("fuzz", &e),
    };
    for v in &report.violations {
        eprintln!(
            "violation: walk {} step {}: {} changed {} -> {} under {}",
            v.walk, v.step, v.invariant, v.before, v.after, v.minimized.site
        );
        eprintln!("minimized before ({} crossings):\n{}", v.minimized.crossings, v.minimized.before);
        eprintln!("minimized after:\n{}", v.minimized.after);
    }
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                passed: bool,
                report: &'a trilink::FuzzReport,
            }
            to_json(&Report { config, body: Body { passed: report.passed(), report: &report } })
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .violations
                .iter()
                .map(|v| {
                    vec![
                        v.walk.to_string(),
                        v.step.to_string(),
                        v.invariant.clone(),
                        v.before.clone(),
                        v.after.clone(),
                        v.minimized.site.to_string(),
                        v.minimized.before.clone(),
                        v.minimized.after.clone(),
                    ]
                })
                .collect();
            to_csv(&["walk", "step", "invariant", "before", "after", "site", "minimized_before", "minimized_after"], &rows)
        }
        OutputFormat::Text => {
            let kinds: Vec<String> = report.moves_by_kind.iter().map(|(k, n)| format!("{k}={n}")).collect();
            let mut s = format!(
                "{} walks, {} moves ({}), {} three-component R3, max {} crossings: {}\n",
                report.walks,
                report.moves,
                kinds.join(" "),
                report.three_component_r3,
                report.max_crossings_seen,
                if report.passed() { "no violations" } else { "VIOLATIONS" }
            );
            for v in &report.violations {
                s.push_str(&format!(
                    "walk {} step {}: {} {} -> {}; minimized at {}:\n{}--\n{}",
                    v.walk, v.step, v.invariant, v.before, v.after, v.minimized.site, v.minimized.before, v.minimized.after
                ));
            }
            s
        }
    };
    emit(&text);
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

#[derive(Serialize)]
struct BasisEntry {
    coefficients: Vec<String>,
    text: Option<String>,
}

pub fn solve(a: &SolveArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    let mix = match a.mix.as_deref().map(|m| MoveMix::parse_with(default_solver_mix(), m)).transpose() {
        Ok(m) => m.unwrap_or_else(default_solver_mix),
        Err(e) => return fail("--mix", &e),
    };
    let sample = sample_relations(a.seed, a.samples, &mix);
    let basis = integer_nullspace(&sample.rows);
    let mut membership = BTreeMap::new();
    for sigma in Permutation::ALL {
        membership.insert(format!("familyI({sigma})"), check_membership(&CoefficientVector::family_i(sigma), &basis));
        membership.insert(format!("familyJ({sigma})"), check_membership(&CoefficientVector::family_j(sigma), &basis));
    }
    membership.insert(
        "RR(123) alone".to_string(),
        check_membership(&CoefficientVector::unit(Family::RR, Permutation::IDENTITY), &basis),
    );
    membership.insert("f(2,2,1,1)".to_string(), check_membership(&CoefficientVector::fact_2211(), &basis));
    let family_rows: Vec<Vec<i64>> = Permutation::ALL
        .iter()
        .flat_map(|&s| [CoefficientVector::family_i(s).flat().to_vec(), CoefficientVector::family_j(s).flat().to_vec()])
        .collect();
    let family_dim = rank(&family_rows, 24);
    let entries: Vec<BasisEntry> = basis
        .iter()
        .map(|v| BasisEntry {
            coefficients: v.iter().map(|x| x.to_string()).collect(),
            text: basis_vector(v).map(|c| c.to_text()),
        })
        .collect();
    // Soundness: every basis vector takes equal values on both sides of every sampled pair.
    let vectors: Vec<CoefficientVector> = basis.iter().filter_map(|v| basis_vector(v)).collect();
    let mut sound = vectors.len() == basis.len();
    for p in &sample.pairs {
        let (Ok(before), Ok(after)) = (CellTable::compute(&p.before), CellTable::compute(&p.after)) else {
            sound = false;
            break;
        };
        if vectors.iter().any(|c| c.eval_cells(&before) != c.eval_cells(&after)) {
            sound = false;
            break;
        }
    }
    let counts: BTreeMap<String, usize> = sample.counts.iter().map(|(k, n)| (k.name().to_string(), *n)).collect();
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                samples: usize,
                distinct_rows: usize,
                rows_by_kind: BTreeMap<String, usize>,
                three_component_r3: usize,
                dimension: usize,
                family_span_dimension: usize,
                extra_dimensions: usize,
                reverified: bool,
                membership: BTreeMap<String, bool>,
                basis: Vec<BasisEntry>,
            }
            to_json(&Report {
                config,
                body: Body {
                    samples: sample.pairs.len(),
                    distinct_rows: sample.rows.len(),
                    rows_by_kind: counts,
                    three_component_r3: sample.three_component_r3,
                    dimension: basis.len(),
                    family_span_dimension: family_dim,
                    extra_dimensions: basis.len().saturating_sub(family_dim),
                    reverified: sound,
                    membership,
                    basis: entries,
                },
            })
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let mut r = vec![(i + 1).to_string()];
                    r.extend(e.coefficients.iter().cloned());
                    r
                })
                .collect();
            let mut header = vec!["vector".to_string()];
            for f in Family::ALL {
                for s in Permutation::ALL {
                    header.push(format!("{}_{s}", f.name()));
                }
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            to_csv(&header, &rows)
        }
        OutputFormat::Text => {
            let mut s = format!(
                "{} sampled pairs, {} distinct rows, {} three-component R3\n",
                sample.pairs.len(),
                sample.rows.len(),
                sample.three_component_r3
            );
            for (k, n) in &counts {
                s.push_str(&format!("  {k}: {n}\n"));
            }
            s.push_str(&format!(
                "nullspace dimension {} (families span {}; {} extra); reverified on all pairs: {}\n",
                basis.len(),
                family_dim,
                basis.len().saturating_sub(family_dim),
                sound
            ));
            for (k, v) in &membership {
                s.push_str(&format!("  {k}: {}\n", if *v { "in span" } else { "not in span" }));
            }
            for (i, e) in entries.iter().enumerate() {
                s.push_str(&format!("# basis vector {}\n", i + 1));
                match &e.text {
                    Some(t) => s.push_str(t),
                    None => s.push_str(&format!("# {}\n", e.coefficients.join(" "))),
                }
            }
            s
        }
    };
    emit(&text);
    if sound {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

pub fn search(a: &SearchArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    if a.bound == 0 {
        return fail("--bound", &Error::BadParameter("bound must be at least 1".into()));
    }
    let mode = match a.mode {
        SearchModeArg::Unlinked => SearchMode::Unlinked,
        SearchModeArg::ResidueZero => SearchMode::ResidueZero,
    };
    let outcome = search_independent(a.bound, a.budget, a.seed, mode);
    #[derive(Serialize)]
    struct Hit {
        candidate: u64,
        code: String,
        crossings: usize,
        #[serde(rename = "familyI")]
        family_i: i64,
        mu123: MuJson,
        reverified: bool,
    }
    let hits: Vec<Hit> = outcome
        .hits
        .iter()
        .take(a.max_hits)
        .map(|h| Hit {
            candidate: h.candidate,
            code: h.diagram.to_code(),
            crossings: h.diagram.num_arrows(),
            family_i: h.family_i,
            mu123: h.mu123.into(),
            reverified: h.reverified,
        })
        .collect();
    let all_reverified = outcome.hits.iter().all(|h| h.reverified);
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                candidates: u64,
                unlinked_candidates: u64,
                max_abs_family_i_unlinked: i64,
                total_hits: usize,
                hits: Vec<Hit>,
            }
            to_json(&Report {
                config,
                body: Body {
                    candidates: outcome.candidates,
                    unlinked_candidates: outcome.unlinked_candidates,
                    max_abs_family_i_unlinked: outcome.max_family_i_unlinked,
                    total_hits: outcome.hits.len(),
                    hits,
                },
            })
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = hits
                .iter()
                .map(|h| {
                    vec![
                        h.candidate.to_string(),
                        h.crossings.to_string(),
                        h.family_i.to_string(),
                        h.mu123.value.to_string(),
                        h.mu123.modulus.to_string(),
                        h.reverified.to_string(),
                        h.code.trim_end().replace('\n', " ; "),
                    ]
                })
                .collect();
            to_csv(&["candidate", "crossings", "familyI", "mu123", "mod", "reverified", "code"], &rows)
        }
        OutputFormat::Text => {
            let mut s = format!(
                "{} candidates, {} with all linking numbers zero (max |familyI| among them: {}), {} hits\n",
                outcome.candidates,
                outcome.unlinked_candidates,
                outcome.max_family_i_unlinked,
                outcome.hits.len()
            );
            for h in &hits {
                s.push_str(&format!(
                    "# candidate {}: familyI={} mu123={} reverified={}\n{}",
                    h.candidate,
                    h.family_i,
                    Residue::new(h.mu123.value, h.mu123.modulus),
                    h.reverified,
                    h.code
                ));
            }
            s
        }
    };
    emit(&text);
    if all_reverified {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn parse_direction(s: &str) -> trilink::Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::BadParameter(format!("direction component `{t}`"))))
        .collect::<trilink::Result<_>>()?;
    match v.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(Error::BadParameter(format!("direction needs 3 components, got {}", v.len()))),
    }
}

pub fn ingest(a: &IngestArgs, config: &RunConfig, format: Option<OutputFormat>) -> u8 {
    let text = match read_input(&a.input) {
        Ok(t) => t,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let kind = a.format.unwrap_or_else(|| {
        let ext = Path::new(&a.input).extension().and_then(|e| e.to_str()).unwrap_or("");
        match ext {
            "json" if text.contains("\"pd\"") => IngestFormat::PdJson,
            "json" => IngestFormat::Json,
            "pd" => IngestFormat::Pd,
            _ => IngestFormat::Xyz,
        }
    });
    let direction = match a.direction.as_deref().map(parse_direction).transpose() {
        Ok(d) => d,
        Err(e) => return fail("--direction", &e),
    };
    let result = match kind {
        IngestFormat::Xyz | IngestFormat::Json => {
            let p = if kind == IngestFormat::Xyz { Polyline3::parse_xyz(&text) } else { Polyline3::parse_json(&text) };
            p.and_then(|p| trilink::ingest::project_with_direction(&p, direction, a.seed)).map(|(g, d)| (g, Some(d)))
        }
        IngestFormat::Pd | IngestFormat::PdJson => {
            let code = if kind == IngestFormat::Pd { PdCode::parse_text(&text) } else { PdCode::parse_json(&text) };
            code.and_then(|c| pd_to_gauss(&c)).map(|g| (g, None))
        }
    };
    let (g, used) = match result {
        Ok(x) => x,
        Err(e) => return fail(&a.input, &e),
    };
    let out = match format {
        None | Some(OutputFormat::Text) => g.to_code(),
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Body {
                code: String,
                components: usize,
                crossings: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                direction: Option<[f64; 3]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                invariants: Option<InvariantReport>,
            }
            let invariants = if g.num_components() == 3 { InvariantReport::compute(&g).ok() } else { None };
            to_json(&Report {
                config,
                body: Body {
                    code: g.to_code(),
                    components: g.num_components(),
                    crossings: g.num_arrows(),
                    direction: used,
                    invariants,
                },
            })
        }
        Some(OutputFormat::Csv) => to_csv(
            &["components", "crossings", "code"],
            &[vec![
                g.num_components().to_string(),
                g.num_arrows().to_string(),
                g.to_code().trim_end().replace('\n', " ; "),
            ]],
        ),
    };
    emit(&out);
    EXIT_OK
}

pub fn catalog(a: &CatalogArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    if let Some(name) = &a.name {
        let g = match catalog_link(name, &a.params) {
            Ok(g) => g,
            Err(e) => return fail(name, &e),
        };
        let report = if g.num_components() == 3 { InvariantReport::compute(&g).ok() } else { None };
        let out = match format {
            OutputFormat::Text => g.to_code(),
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Body<'a> {
                    name: &'a str,
                    params: &'a [i64],
                    code: String,
                    crossings: usize,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    invariants: Option<InvariantReport>,
                }
                to_json(&Report {
                    config,
                    body: Body { name, params: &a.params, code: g.to_code(), crossings: g.num_arrows(), invariants: report },
                })
            }
            OutputFormat::Csv => to_csv(
                &["name", "crossings", "code"],
                &[vec![name.clone(), g.num_arrows().to_string(), g.to_code().trim_end().replace('\n', " ; ")]],
            ),
        };
        emit(&out);
        return EXIT_OK;
    }
    #[derive(Serialize)]
    struct Entry {
        name: String,
        crossings: Option<usize>,
        verified: Option<bool>,
        note: Option<String>,
    }
    let mut entries: Vec<Entry> = shipped_catalog()
        .iter()
        .map(|e| {
            let v = e.verify();
            Entry {
                name: e.name.clone(),
                crossings: Some(e.diagram.num_arrows()),
                verified: Some(v.is_ok()),
                note: v.err(),
            }
        })
        .collect();
    for (name, note) in [
        ("unlink <n>", "any number of components"),
        ("chain <a> <b>", "lk(1,2) = a, lk(2,3) = b"),
        ("L2m+", "unavailable: diagram not transcribed"),
        ("L2m-", "unavailable: diagram not transcribed"),
    ] {
        entries.push(Entry { name: name.into(), crossings: None, verified: None, note: Some(note.into()) });
    }
    let ok = entries.iter().all(|e| e.verified != Some(false));
    let out = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                entries: Vec<Entry>,
            }
            to_json(&Report { config, body: Body { entries } })
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        e.name.clone(),
                        e.crossings.map(|n| n.to_string()).unwrap_or_default(),
                        e.verified.map(|v| v.to_string()).unwrap_or_default(),
                        e.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            to_csv(&["name", "crossings", "verified", "note"], &rows)
        }
        OutputFormat::Text => entries
            .iter()
            .map(|e| {
                let status = match e.verified {
                    Some(true) => "ok".to_string(),
                    Some(false) => "FAILED".to_string(),
                    None => "-".to_string(),
                };
                let extra = e.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
                format!("{:<20} {:>4} {status}{extra}\n", e.name, e.crossings.map(|n| n.to_string()).unwrap_or_default())
            })
            .collect(),
    };
    emit(&out);
    if ok {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

/// Writes `g` with shuffled, sparse labels and varied separators; parsing
/// the result gives back `g` up to canonical relabelling.
fn scrambled_code(g: &GaussDiagram, seed: u64) -> String {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = g.num_arrows();
    let mut labels: Vec<u64> = (1..=(10 * n as u64).max(1)).collect();
    labels.shuffle(&mut rng);
    let words: Vec<String> = g
        .to_tokens()
        .iter()
        .map(|w| {
            w.iter()
                .map(|t| {
                    let mut t = *t;
                    t.label = labels[t.label as usize - 1];
                    t.to_string()
                })
                .collect::<Vec<_>>()
                .join(if rng.gen_bool(0.5) { " " } else { "  " })
        })
        .collect();
    let mut out = format!("# {n} crossings\n");
    if rng.gen_bool(0.5) {
        out.push_str(&words.join(" ; "));
        out.push('\n');
    } else {
        for w in &words {
            out.push_str(w);
            out.push('\n');
        }
    }
    out
}

pub fn generate(a: &GenerateArgs, config: &RunConfig, format: OutputFormat) -> u8 {
    use rand::{Rng, SeedableRng};
    if let Err(e) = std::fs::create_dir_all(&a.out) {
        eprintln!("error: {}: {e}", a.out.display());
        return EXIT_INPUT;
    }
    let mut files: Vec<(PathBuf, usize)> = Vec::new();
    for i in 0..a.count {
        let seed = derive_seed(a.seed, i as u64);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let crossings = rng.gen_range(0..=a.crossings);
        let mode = match a.mode {
            GenerateMode::Trivial => RandomMode::Trivial,
            GenerateMode::Spliced => RandomMode::Spliced,
            GenerateMode::Mixed if rng.gen_bool(0.5) => RandomMode::Spliced,
            GenerateMode::Mixed => RandomMode::Trivial,
        };
        let g = match trilink::random_link_diagram(3, crossings, seed, mode) {
            Ok(g) => g,
            Err(e) => return fail("generate", &e),
        };
        let text = if a.scramble { scrambled_code(&g, derive_seed(seed, 1)) } else { g.to_code() };
        let path = a.out.join(format!("{i:04}.gauss"));
        if let Err(e) = std::fs::write(&path, text) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
        files.push((path, g.num_arrows()));
    }
    let out = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct File {
                path: String,
                crossings: usize,
            }
            #[derive(Serialize)]
            struct Body {
                files: Vec<File>,
            }
            let files =
                files.iter().map(|(p, n)| File { path: p.display().to_string(), crossings: *n }).collect();
            to_json(&Report { config, body: Body { files } })
        }
        OutputFormat::Csv => to_csv(
            &["path", "crossings"],
            &files.iter().map(|(p, n)| vec![p.display().to_string(), n.to_string()]).collect::<Vec<_>>(),
        ),
        OutputFormat::Text => files.iter().map(|(p, n)| format!("{} {n}\n", p.display())).collect(),
    };
    emit(&out);
    EXIT_OK
}
