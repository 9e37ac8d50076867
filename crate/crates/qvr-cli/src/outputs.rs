//! Output files: JSON reports with a fixed envelope, histogram/sweep CSVs.
//!
//! Every file carries the tool version and the configuration hash. All
//! content is deterministic for a given (config, seed): field order is
//! struct order, floats print in shortest round-trip form, and nothing
//! records wall-clock time or worker count.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qvr::radiation::Histogram;
use qvr::scaling::{ScalingFit, SweepTable};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct RunError {
    pub kind: String,
    pub message: String,
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for RunError {}

impl RunError {
    pub fn new(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn io(err: std::io::Error, path: &Path) -> Self {
        Self::new("io", format!("{}: {err}", path.display()))
    }
}

impl From<qvr::Error> for RunError {
    fn from(e: qvr::Error) -> Self {
        RunError::new(e.kind(), e.to_string())
    }
}

/// Fixed report envelope.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profile_warnings: Vec<qvr::profiles::ProfileWarning>,
    pub result: T,
}

pub fn write_report<T: Serialize>(dir: &Path, report: &Report<T>) -> Result<PathBuf, RunError> {
    let path = dir.join("report.json");
    let mut body = serde_json::to_string_pretty(report)
        .map_err(|e| RunError::new("serialize", e.to_string()))?;
    body.push('\n');
    fs::write(&path, body).map_err(|e| RunError::io(e, &path))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, RunError> {
    let path = dir.join(name);
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| RunError::new("serialize", e.to_string()))?;
    body.push('\n');
    fs::write(&path, body).map_err(|e| RunError::io(e, &path))?;
    Ok(path)
}

fn stamp(out: &mut String, config_hash: &str) {
    out.push_str(&format!("# qvr {TOOL_VERSION} config_hash={config_hash}\n"));
}

/// Histogram CSV: stamped comment line, then `bin_low,bin_high,weight,weight_error`.
pub fn write_histogram_csv(
    dir: &Path,
    name: &str,
    hist: &Histogram,
    config_hash: &str,
) -> Result<PathBuf, RunError> {
    let path = dir.join(name);
    let mut out = String::new();
    stamp(&mut out, config_hash);
    out.push_str("bin_low,bin_high,weight,weight_error\n");
    for i in 0..hist.bins() {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e}\n",
            hist.edges[i],
            hist.edges[i + 1],
            hist.weights[i],
            hist.errors[i]
        ));
    }
    fs::write(&path, out).map_err(|e| RunError::io(e, &path))?;
    Ok(path)
}

/// Sweep CSV: stamped comment line, then `parameter,value,error`.
pub fn write_sweep_csv(
    dir: &Path,
    table: &SweepTable,
    config_hash: &str,
) -> Result<PathBuf, RunError> {
    let path = dir.join("sweep.csv");
    let mut out = String::new();
    stamp(&mut out, config_hash);
    out.push_str("parameter,value,error\n");
    for p in &table.points {
        out.push_str(&format!("{:e},{:e},{:e}\n", p.parameter, p.value, p.error));
    }
    fs::write(&path, out).map_err(|e| RunError::io(e, &path))?;
    Ok(path)
}

/// Verdict of a sweep against the predicted exponent.
#[derive(Debug, Serialize)]
pub struct Verdict {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub regime: String,
    pub parameter: String,
    pub observable: String,
    pub expected: f64,
    pub fitted: f64,
    pub stderr: f64,
    pub r_squared: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(
        table: &SweepTable,
        fit: &ScalingFit,
        expected: f64,
        tolerance: f64,
        config_hash: &str,
    ) -> Self {
        Self {
            schema: crate::config::SCHEMA_VERSION,
            tool: "qvr",
            version: TOOL_VERSION,
            config_hash: config_hash.to_string(),
            regime: table.regime.name().into(),
            parameter: table.parameter.name().into(),
            observable: table.observable.name().into(),
            expected,
            fitted: fit.exponent,
            stderr: fit.std_error,
            r_squared: fit.r_squared,
            tolerance,
            pass: (fit.exponent - expected).abs() <= tolerance,
        }
    }
}

/// Machine-readable error JSON (stderr).
#[derive(Debug, Serialize)]
pub struct ErrorJson<'a> {
    pub error: ErrorBody<'a>,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody<'a> {
    pub kind: &'a str,
    pub message: String,
}

pub fn error_json(kind: &str, message: impl Into<String>) -> String {
    serde_json::to_string(&ErrorJson {
        error: ErrorBody {
            kind,
            message: message.into(),
        },
    })
    .unwrap_or_else(|_| format!("{{\"error\":{{\"kind\":\"{kind}\"}}}}"))
}

/// Writer that stamps arbitrary text files.
pub fn write_text(dir: &Path, name: &str, body: &str) -> Result<PathBuf, RunError> {
    let path = dir.join(name);
    let mut f = fs::File::create(&path).map_err(|e| RunError::io(e, &path))?;
    f.write_all(body.as_bytes())
        .map_err(|e| RunError::io(e, &path))?;
    Ok(path)
}
