//! Report data model.
//!
//! A run produces one [`Report`]: a version stamp, an echo of the resolved
//! configuration, a fixed-order list of [`Record`]s, the overall verdict,
//! and the wall time. Everything except `wall_ms` is a pure function of
//! the configuration and seed, so two runs with the same inputs serialize
//! to byte-identical JSON once `wall_ms` is masked.

use serde::{Deserialize, Serialize};

/// One named check.
///
/// Residual records carry `tolerance: Some(t)` and pass if and only if
/// `worst_residual <= t`. Value records report a computed number (a norm,
/// a search minimum) in `worst_residual` with `tolerance: null`; they pass
/// unconditionally, and the acceptance condition on the number, if any,
/// lives in a separate residual record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Record {
    /// Stable `family/subject` identifier.
    pub name: String,
    /// Human-readable statement of the checked relation or reported value.
    pub anchor: String,
    /// Number of point evaluations behind `worst_residual` (for the probe
    /// records, the number of restarts).
    pub points: usize,
    /// Largest deviation seen, or the reported value for value records.
    pub worst_residual: f64,
    /// Pass threshold; `null` marks a value record.
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Record {
    /// A residual record; the verdict is derived from the threshold.
    pub fn residual(name: &str, anchor: &str, points: usize, worst: f64, tol: f64) -> Record {
        Record {
            name: name.to_string(),
            anchor: anchor.to_string(),
            points,
            worst_residual: worst,
            tolerance: Some(tol),
            pass: worst <= tol,
        }
    }

    /// A value record; always passing, informational.
    pub fn value(name: &str, anchor: &str, points: usize, value: f64) -> Record {
        Record {
            name: name.to_string(),
            anchor: anchor.to_string(),
            points,
            worst_residual: value,
            tolerance: None,
            pass: true,
        }
    }
}

/// Echo of everything that determined the run, for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    /// Subcommand name.
    pub command: String,
    /// Path of the extension config file, if one was supplied.
    pub config: Option<String>,
    pub seed: u64,
    /// Restart count for the probe commands, `null` elsewhere.
    pub restarts: Option<usize>,
    /// The point specification in force, `null` where not applicable.
    pub points: Option<String>,
    /// Subject names (`--manifold`, `--frame`, `--map`) in that order.
    pub subjects: Vec<String>,
    pub tol_identity: Option<f64>,
    pub tol_curvature: Option<f64>,
    pub tol_bitension: Option<f64>,
}

/// Complete run output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    /// Tool version (the crate version).
    pub version: String,
    /// Resolved configuration echo.
    pub config: ConfigEcho,
    /// Checks in a fixed, documented order.
    pub records: Vec<Record>,
    /// True if and only if every record passes.
    pub pass: bool,
    /// Wall-clock duration of the run in milliseconds. The only field
    /// excluded from the byte-reproducibility guarantee.
    pub wall_ms: u64,
}

impl Report {
    pub fn new(config: ConfigEcho, records: Vec<Record>, wall_ms: u64) -> Report {
        let pass = records.iter().all(|r| r.pass);
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            records,
            pass,
            wall_ms,
        }
    }

    /// Pretty JSON with a trailing newline, the on-disk and stdout format.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
