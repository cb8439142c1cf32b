//! CSV table and JSON sidecar writers.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::{emit_config, RunConfig};
use crate::run::Report;

/// CSV text: header, then one `{:.16e}` row per record, LF endings.
pub fn render_csv(report: &Report) -> String {
    let mut s = report.columns.join(",");
    s.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Sidecar document; non-finite numbers serialise as `null`.
pub fn render_json(config: &RunConfig, report: &Report) -> String {
    let doc = json!({
        "config": config,
        "config_text": emit_config(config),
        "columns": report.columns,
        "rows": report.rows,
        "summary": report.summary,
        "diagnostics": report.diagnostics,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values always serialise");
    s.push('\n');
    s
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Writes the CSV to `config.out` and the sidecar next to it; returns both paths.
pub fn write_outputs(config: &RunConfig, report: &Report) -> io::Result<(PathBuf, PathBuf)> {
    let csv = config.out.clone();
    let side = sidecar_path(&csv);
    if let Some(dir) = csv.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&csv, render_csv(report))?;
    fs::write(&side, render_json(config, report))?;
    Ok((csv, side))
}
