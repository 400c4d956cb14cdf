//! Timing reports and their CSV/JSON forms.
//!
//! CSV columns are fixed: `n,algorithm,median_ms,best_value,optimum,ratio`.
//! `optimum` and `ratio` are empty when no exact oracle was run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::engine::RunRecord;

pub const CSV_HEADER: &str = "n,algorithm,median_ms,best_value,optimum,ratio";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(HarnessError::Invalid(format!("unknown report format '{other}'"))),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub n: usize,
    /// Knapsack capacity W for the instance, when the family has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<u64>,
    pub algorithm: String,
    pub median_ms: f64,
    pub best_value: f64,
    pub optimum: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
    /// Least-squares slope of ln(median_ms) against ln(n), per algorithm.
    #[serde(default)]
    pub slopes: BTreeMap<String, f64>,
    /// Settings the report was produced with.
    #[serde(default)]
    pub settings: BTreeMap<String, serde_json::Value>,
}

impl TimingReport {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a TimingRow> {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }

    /// Recomputes `slopes` from the rows; algorithms with fewer than two
    /// distinct sizes get no slope.
    pub fn compute_slopes(&mut self) {
        let mut by_alg: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
        for r in &self.rows {
            by_alg
                .entry(r.algorithm.as_str())
                .or_default()
                .push((r.n as f64, r.median_ms));
        }
        self.slopes = by_alg
            .into_iter()
            .filter_map(|(alg, pts)| loglog_slope(&pts).map(|s| (alg.to_string(), s)))
            .collect();
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                r.algorithm,
                r.median_ms,
                r.best_value,
                opt(r.optimum),
                opt(r.ratio)
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("report json: {e}")))
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }
}

/// Least-squares slope of ln(y) on ln(x). `None` with fewer than two
/// distinct x values or any non-positive coordinate.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Median of a nonempty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Writes a timing report. Errors on an empty report.
pub fn emit_report(report: &TimingReport, format: ReportFormat, path: &Path) -> Result<(), HarnessError> {
    if report.is_empty() {
        return Err(HarnessError::Invalid("report has no rows".into()));
    }
    std::fs::write(path, report.render(format)).map_err(|e| HarnessError::io(path, e))
}

pub const RECORDS_CSV_HEADER: &str =
    "algorithm,seed,best_fitness,evaluations,iterations,wall_time_ms,stop_reason";

/// Renders a batch of run records: a JSON array, or one CSV row per run.
pub fn render_records(records: &[RunRecord], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = String::from(RECORDS_CSV_HEADER);
            out.push('\n');
            for r in records {
                let stop = serde_json::to_value(r.stop_reason).expect("stop reason serializes");
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.algorithm,
                    r.seed,
                    r.best_fitness,
                    r.evaluations,
                    r.iterations,
                    r.wall_time_ms,
                    stop.as_str().unwrap_or_default()
                )
                .unwrap();
            }
            out
        }
    }
}

pub fn emit_records(records: &[RunRecord], format: ReportFormat, path: &Path) -> Result<(), HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::Invalid("no run records to write".into()));
    }
    std::fs::write(path, render_records(records, format)).map_err(|e| HarnessError::io(path, e))
}
