//! Report rendering: JSON (default), CSV and plain text.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Largest integer every JSON consumer represents exactly (2^53 − 1).
const MAX_SAFE: u64 = (1 << 53) - 1;

/// Replaces integers outside the 53-bit safe range by decimal strings.
pub fn json_safe(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let unsafe_int = n.as_u64().is_some_and(|x| x > MAX_SAFE)
                || n.as_i64().is_some_and(|x| x.unsigned_abs() > MAX_SAFE);
            if unsafe_int {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(json_safe).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, json_safe(v))).collect()),
        other => other,
    }
}

/// Pretty-printed, 53-bit-safe JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&json_safe(v)).expect("values serialize");
    s.push('\n');
    s
}

/// Renders rows as CSV with a header line.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}
