//! Experiment configuration, the simulation-versus-prediction comparison,
//! the spectral consistency check and the quick self-verification suites.

mod compare;
mod config;
mod ist;
mod verify;

pub use compare::{
    compare_on_ray, decays_within_factor_two, local_wave, max_growth, loglog_slope, write_rows_csv, BranchOutcome,
    ComparisonReport, ComparisonRow, LocalWave,
};
pub use config::{
    BranchChoice, ConventionChoice, DampingConfig, ExperimentConfig, GridConfig, IstConfig, ReflectionGrid, SpongeConfig,
};
pub use ist::{fit_rate, ist_consistency, IstReport, IstTime, RATE_CANDIDATES, REFERENCE_SIGN};
pub use verify::{verify, Suite, VerifyReport};

use crate::Result;
use std::path::Path;

/// A named scalar check against a tolerance.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= tolerance` (and is not NaN).
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, passed: value <= tolerance }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, passed: ok }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {:.3e} (tolerance {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

/// Run metadata written next to every output.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Manifest<'a, T: serde::Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub created_unix: u64,
    pub config_hash: Option<String>,
    pub branch: Option<String>,
    pub sigma: Option<i32>,
    pub payload: T,
}

impl<'a, T: serde::Serialize> Manifest<'a, T> {
    pub fn new(command: &'a str, payload: T) -> Self {
        Manifest {
            tool: "mkdv5",
            version: env!("CARGO_PKG_VERSION"),
            command,
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config_hash: None,
            branch: None,
            sigma: None,
            payload,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
