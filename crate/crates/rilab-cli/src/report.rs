//! Report envelope and table output.
//!
//! Every run emits one JSON envelope: config echo, provenance, a verdict
//! list, and a command-specific `results` payload. The only field that
//! varies between identical runs is `timestamp_unix`. Tables go to CSV in
//! long format, one measurement per row, `.` decimal, 17 significant
//! digits on measured values so round-trips are exact.

use crate::config::ExperimentConfig;
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub artifact_version: String,
    pub tolerance: f64,
    /// Human note on how integrals were priced.
    pub quadrature: String,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    /// The heuristic the verdict applied, spelled out for the reader.
    pub rule: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, rule: &str) -> Self {
        Verdict { name: name.into(), pass, rule: rule.into() }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub command: String,
    pub timestamp_unix: u64,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: ExperimentConfig, provenance: Provenance) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ReportEnvelope {
            schema_version: crate::config::SCHEMA_VERSION,
            command: command.into(),
            timestamp_unix,
            config,
            provenance,
            verdicts: Vec::new(),
            results: None,
            error: None,
        }
    }
}

/// Long-format table: fixed header, string cells. Measured values should be
/// rendered with [`sig`], coordinates with plain `Display`.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// 17 significant digits, enough to reconstruct the f64 bit pattern.
pub fn sig(v: f64) -> String {
    format!("{v:.16e}")
}
