//! Number formatting and artifact writing shared by all commands.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips exactly. Text artifacts use LF line endings.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::value::RawValue;

use crate::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float as a raw JSON number in the same format, or `null` if it is not
/// finite.
pub fn json_f64(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { fmt_f64(x) } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// Joins a header and rows of floats into CSV text.
pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path`, or to standard output without one.
pub fn write_artifact(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
