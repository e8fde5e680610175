//! CSV curves and JSON documents.

use std::fmt::Write as _;
use std::path::Path;

use hom_core::analysis::DipPoint;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Writes `t_d,P_RB` rows with shortest round-trip float formatting and LF endings.
pub fn emit_curve(curve: &[DipPoint], path: &Path) -> CliResult<()> {
    if curve.is_empty() {
        return Err(CliError::Validation("cannot write an empty curve".into()));
    }
    let mut text = String::from("t_d,P_RB\n");
    for p in curve {
        writeln!(text, "{:?},{:?}", p.delay, p.coincidence).expect("writing to a String");
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
