//! `trilink`: invariants of three-component links from the command line.
//!
//! Exit status: 0 success, 2 unparsable input or bad usage, 3 invariance
//! violation, 4 internal contract breach.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use output::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "trilink", version, about = "Gauss-diagram invariants of three-component links")]
struct Cli {
    /// JSON file with default flag values for the subcommand (keys are flag names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Report format; `ingest` prints bare Gauss code unless this is given.
    #[arg(long, global = true, value_enum)]
    output_format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Linking numbers, both invariant families, μ₁₂₃ and f(2,2,1,1) per input.
    Compute(ComputeArgs),
    /// Random Reidemeister-move walks checking exact invariance.
    Fuzz(FuzzArgs),
    /// Sample move relations and compute the space of invariant coefficient vectors.
    Solve(SolveArgs),
    /// Look for diagrams with μ₁₂₃ = 0 but a nonzero first family.
    Search(SearchArgs),
    /// Convert 3D polylines or PD codes to Gauss code.
    Ingest(IngestArgs),
    /// List, show or verify the shipped link catalog.
    Catalog(CatalogArgs),
    /// Write random realizable diagrams as Gauss-code files.
    Generate(GenerateArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Compute(_) => "compute",
            Command::Fuzz(_) => "fuzz",
            Command::Solve(_) => "solve",
            Command::Search(_) => "search",
            Command::Ingest(_) => "ingest",
            Command::Catalog(_) => "catalog",
            Command::Generate(_) => "generate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// `.json` files as JSON, everything else as Gauss-code text.
    Auto,
    Gauss,
    Json,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ComputeArgs {
    /// Diagram files (`-` for stdin).
    pub inputs: Vec<String>,
    /// Inline Gauss code (repeatable).
    #[arg(long)]
    pub code: Vec<String>,
    /// Catalog link, optionally with parameters: `borromean`, `unlink:3`, `chain:2,3`.
    #[arg(long)]
    pub catalog: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub input_format: InputFormat,
    /// Coefficient file; its value is reported as `custom`.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    /// Scale applied to both invariant families.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub lambda: i64,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 100)]
    pub walks: usize,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, env = "TRILINK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub max_crossings: usize,
    /// Random start diagrams get up to this many crossings.
    #[arg(long, default_value_t = 20)]
    pub start_crossings: usize,
    /// familyI, familyJ, mu123, lk or all.
    #[arg(long, default_value = "all")]
    pub invariant: String,
    /// Move weights, e.g. `r1=1,r2=2,r3=4,bp=1`.
    #[arg(long)]
    pub mix: Option<String>,
    /// Start every walk from this diagram file instead of random diagrams.
    #[arg(long)]
    pub input: Option<String>,
    /// Start every walk from this catalog link.
    #[arg(long, conflicts_with = "input")]
    pub catalog: Option<String>,
    /// Also watch the value of this coefficient file.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 600)]
    pub samples: usize,
    #[arg(long, env = "TRILINK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Overrides of the sampling weights, e.g. `r3=6,bp=2`.
    #[arg(long)]
    pub mix: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchModeArg {
    /// All linking numbers zero.
    Unlinked,
    /// μ₁₂₃ ≡ 0 modulo the linking gcd, any linking numbers.
    ResidueZero,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SearchArgs {
    /// Maximum crossing count of candidates.
    #[arg(long, default_value_t = 20)]
    pub bound: usize,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, env = "TRILINK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "unlinked")]
    pub mode: SearchModeArg,
    /// Report at most this many hits.
    #[arg(long, default_value_t = 20)]
    pub max_hits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IngestFormat {
    Xyz,
    Json,
    Pd,
    PdJson,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct IngestArgs {
    /// Input file (`-` for stdin).
    #[arg(long)]
    pub input: String,
    /// Input format; guessed from the extension when omitted (.xyz, .json, .pd).
    #[arg(long, value_enum)]
    pub format: Option<IngestFormat>,
    /// Projection direction `x,y,z`; random (seeded) when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    #[arg(long, env = "TRILINK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct CatalogArgs {
    /// Link to show; lists and verifies every entry when omitted.
    pub name: Option<String>,
    /// Parameters, e.g. `catalog unlink 3` or `catalog chain 2 3`.
    #[arg(allow_negative_numbers = true)]
    pub params: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerateMode {
    Trivial,
    Spliced,
    Mixed,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Crossing counts are drawn from `0..=crossings`.
    #[arg(long, default_value_t = 20)]
    pub crossings: usize,
    #[arg(long, env = "TRILINK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "mixed")]
    pub mode: GenerateMode,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Write non-canonical labels, `;` separators and comments.
    #[arg(long)]
    pub scramble: bool,
}

/// Everything needed to reproduce a run; echoed into JSON reports.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub subcommand: &'static str,
    #[serde(flatten)]
    pub command: &'a Command,
}

/// Turns config-file entries into flags placed before the user's own, so
/// explicit flags win.
fn config_args(path: &PathBuf) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let Value::Object(map) = doc else {
        return Err(format!("{}: config must be a JSON object", path.display()));
    };
    let scalar = |v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported config value {other}")),
    };
    let mut flags = Vec::new();
    let mut positional = Vec::new();
    for (key, value) in map {
        if matches!(key.as_str(), "inputs" | "name" | "params") {
            let values = match &value {
                Value::Array(a) => a.iter().map(scalar).collect::<Result<Vec<_>, _>>()?,
                v => vec![scalar(v)?],
            };
            positional.extend(values);
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(a) => {
                for v in &a {
                    flags.push(flag.clone());
                    flags.push(scalar(v)?);
                }
            }
            v => {
                flags.push(flag);
                flags.push(scalar(&v)?);
            }
        }
    }
    if !positional.is_empty() {
        flags.push("--".into());
        flags.extend(positional);
    }
    Ok(flags.into_iter().map(OsString::from).collect())
}

fn parse_cli() -> Result<Cli, ExitCode> {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let cli = Cli::try_parse_from(&raw).unwrap_or_else(|e| e.exit());
    let Some(path) = cli.config.clone() else { return Ok(cli) };
    let extra = match config_args(&path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: config {m}");
            return Err(ExitCode::from(2));
        }
    };
    let name = cli.command.name();
    let at = raw.iter().position(|a| a == name).expect("subcommand present in argv");
    let (head, tail) = raw.split_at(at + 1);
    // Config positionals go after `--`; user positionals would then be
    // misread as flags' values, so user arguments come first.
    let (config_flags, config_pos): (Vec<OsString>, Vec<OsString>) = match extra.iter().position(|a| a == "--") {
        Some(i) => (extra[..i].to_vec(), extra[i + 1..].to_vec()),
        None => (extra, Vec::new()),
    };
    let mut argv: Vec<OsString> = head.to_vec();
    argv.extend(config_flags);
    argv.extend(tail.iter().cloned());
    if !config_pos.is_empty() {
        let cli_only = Cli::try_parse_from(&raw).unwrap_or_else(|e| e.exit());
        if !commands::has_positionals(&cli_only.command) {
            argv.push("--".into());
            argv.extend(config_pos);
        }
    }
    Ok(Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit()))
}

fn main() -> ExitCode {
    let cli = match parse_cli() {
        Ok(c) => c,
        Err(code) => return code,
    };
    let config = RunConfig { subcommand: cli.command.name(), command: &cli.command };
    let code = match &cli.command {
        Command::Compute(a) => commands::compute(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
        Command::Fuzz(a) => commands::fuzz(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
        Command::Solve(a) => commands::solve(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
        Command::Search(a) => commands::search(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
        Command::Ingest(a) => commands::ingest(a, &config, cli.output_format),
        Command::Catalog(a) => commands::catalog(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
        Command::Generate(a) => commands::generate(a, &config, cli.output_format.unwrap_or(OutputFormat::Json)),
    };
    ExitCode::from(code)
}
