//! CSV and JSON emission. Files are byte-reproducible: no timestamps, fixed
//! column order, shortest-round-trip float formatting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::Result;
use crate::experiments::ExperimentConfig;

/// Columns are joined with commas; values must not contain commas themselves.
pub(crate) fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// Run metadata: schema version, tool version, the full config echo and a
/// per-experiment summary object.
pub(crate) fn render_meta(cfg: &ExperimentConfig, summary: serde_json::Value) -> Result<String> {
    let meta = json!({
        "schema_version": 1,
        "tool": "qneuron",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "experiment": cfg.id.as_str(),
        "config": cfg,
        "summary": summary,
    });
    Ok(format!("{:#}\n", meta))
}

pub(crate) fn fmt_f64(value: f64) -> String {
    if value.is_nan() {
        "nan".to_string()
    } else {
        format!("{value}")
    }
}
