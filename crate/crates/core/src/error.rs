use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("crossing label {label} appears {count} time(s); expected exactly twice")]
    LabelCount { label: u64, count: usize },
    #[error("crossing label {label} is used twice as {kind}; expected one O and one U")]
    LabelKind { label: u64, kind: char },
    #[error("crossing label {label} carries different signs at its two ends")]
    SignMismatch { label: u64 },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("operation needs {expected} components, diagram has {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("component index {index} out of range (diagram has {count})")]
    ComponentIndex { index: usize, count: usize },
    #[error("linking number of a component with itself is undefined")]
    SameComponent,
    #[error("half-sum of crossing signs between components {a} and {b} is not integral (sum {sum}); input is not realizable")]
    NonIntegralLinking { a: usize, b: usize, sum: i64 },
    #[error("f(2,2,1,1) = {value} is not divisible by 6")]
    NotDivisibleBySix { value: i64 },
    #[error("triple linking cross-check failed: f(2,2,1,1)/6 = {sixth}, based formula = {based}, modulus {modulus}")]
    TripleLinkingMismatch { sixth: i64, based: i64, modulus: u64 },
    #[error("move site is not applicable to this diagram: {0}")]
    StaleSite(String),
    #[error("pattern file: {0}")]
    Pattern(String),
    #[error("coefficient file line {line}: {message}")]
    Coefficients { line: usize, message: String },
    #[error("unknown catalog entry `{0}`")]
    UnknownLink(String),
    #[error("catalog entry `{name}` is unavailable: {reason}")]
    Unavailable { name: String, reason: String },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("PD code: {0}")]
    Pd(String),
    #[error("polyline: {0}")]
    Polyline(String),
    #[error("projection stayed degenerate after {attempts} perturbed directions")]
    DegenerateProjection { attempts: usize },
    #[error("JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
