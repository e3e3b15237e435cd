//! Machine-readable experiment reports: CSV and JSON emission.
//!
//! Output files are byte-stable across runs with identical config and seed:
//! floats render through the shortest round-trip formatter, column order is
//! fixed, and wall-clock timing stays out of the serialized form.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::OutputFormat;

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// One acceptance clause of an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ClauseSummary {
    pub criterion: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub rows: Table,
    pub summary: Vec<ClauseSummary>,
    /// Wall-clock seconds per phase; excluded from emitted files so outputs
    /// stay byte-identical across runs.
    #[serde(skip)]
    pub timing: Vec<(String, f64)>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        !self.summary.is_empty() && self.summary.iter().all(|c| c.passed)
    }
}

pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string() // collapse -0
    } else {
        format!("{v}")
    }
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|t| fmt_f64(*t)).collect();
    format!("[{}]", parts.join(";"))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(
        &report
            .rows
            .columns
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in &report.rows.rows {
        out.push_str(
            &row.iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

pub fn render_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

/// Write the report in the requested format; byte-stable for fixed inputs.
pub fn emit_table(report: &ExperimentReport, format: OutputFormat, path: &str) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report),
    };
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {path}"))?;
    f.write_all(body.as_bytes())
        .with_context(|| format!("writing {path}"))?;
    Ok(())
}
