//! Run configuration and the structured result format emitted by the
//! verification suites.

use crate::models::{ModelError, SurfaceSpec};
use crate::theta::{PeriodMatrix, TruncationPolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Complex scalar as a `[re, im]` pair in JSON.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffConfig {
    pub b: ComplexPair,
    pub c: ComplexPair,
    pub d: ComplexPair,
}

impl Default for CoeffConfig {
    fn default() -> Self {
        CoeffConfig { b: [0.9, 0.1], c: [1.1, -0.2], d: [0.8, 0.3] }
    }
}

/// Everything a run needs: the period matrix, surface coefficients, tolerance
/// overrides, sample counts, the seed, and the suite selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Period matrix entries as `[re, im]` pairs, row by row.
    pub tau: [[ComplexPair; 3]; 3],
    pub coeffs: CoeffConfig,
    /// Named tolerance overrides; unknown names are rejected.
    pub tolerances: BTreeMap<String, f64>,
    pub samples: usize,
    pub seed: u64,
    pub suites: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let zero = [0.0, 0.0];
        RunConfig {
            tau: [
                [[0.0, 1.0], zero, zero],
                [zero, [0.0, 1.3], zero],
                [zero, zero, [0.0, 0.7]],
            ],
            coeffs: CoeffConfig::default(),
            tolerances: BTreeMap::new(),
            samples: 200,
            seed: 1,
            suites: vec!["all".to_string()],
        }
    }
}

pub const SUITE_NAMES: [&str; 6] =
    ["theta", "models", "canonical", "legendre", "symbolic", "bidouble"];

const TOLERANCE_NAMES: [&str; 8] = [
    "theta_identity",
    "base_point_residual",
    "pencil_identity",
    "membership",
    "chordal",
    "legendre_calibration",
    "alignment",
    "bitangency",
];

impl RunConfig {
    /// Validates the structural constraints: a usable period matrix, a
    /// positive sample count, known suite names, and known tolerance names.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.samples == 0 {
            return Err(ConfigError::ConfigInvalid("samples must be positive".into()));
        }
        if self.samples > 100_000 {
            return Err(ConfigError::ConfigInvalid(
                "samples is unreasonably large (max 100000)".into(),
            ));
        }
        for name in &self.suites {
            if name != "all" && !SUITE_NAMES.contains(&name.as_str()) {
                return Err(ConfigError::ConfigInvalid(format!(
                    "unknown suite {:?}; expected one of {:?} or \"all\"",
                    name, SUITE_NAMES
                )));
            }
        }
        if self.suites.is_empty() {
            return Err(ConfigError::ConfigInvalid("suites must not be empty".into()));
        }
        for (name, value) in &self.tolerances {
            if !TOLERANCE_NAMES.contains(&name.as_str()) {
                return Err(ConfigError::ConfigInvalid(format!(
                    "unknown tolerance {:?}; expected one of {:?}",
                    name, TOLERANCE_NAMES
                )));
            }
            if !value.is_finite() || *value <= 0.0 {
                return Err(ConfigError::ConfigInvalid(format!(
                    "tolerance {:?} must be a positive finite number",
                    name
                )));
            }
        }
        // Period matrix constraints surface through the constructor.
        self.period_matrix()?;
        Ok(())
    }

    pub fn period_matrix(&self) -> Result<PeriodMatrix, ConfigError> {
        let rows: Vec<Vec<Complex64>> = self
            .tau
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        PeriodMatrix::from_rows(&rows)
            .map_err(|e| ConfigError::ConfigInvalid(format!("tau: {}", e)))
    }

    pub fn surface_spec(&self) -> Result<SurfaceSpec, ConfigError> {
        let tau = self.period_matrix()?;
        let c = &self.coeffs;
        let spec = SurfaceSpec::new(
            tau,
            Complex64::new(c.b[0], c.b[1]),
            Complex64::new(c.c[0], c.c[1]),
            Complex64::new(c.d[0], c.d[1]),
            TruncationPolicy::default(),
        )?;
        Ok(spec)
    }

    /// Resolves a named tolerance with its default.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// The suites selected by this config, expanded and in canonical order.
    pub fn selected_suites(&self) -> Vec<String> {
        let want_all = self.suites.iter().any(|s| s == "all");
        SUITE_NAMES
            .iter()
            .filter(|name| want_all || self.suites.iter().any(|s| s == *name))
            .map(|s| s.to_string())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A measured discrepancy that is reported as data rather than failure:
    /// the run records what was found without gating on it.
    Finding,
}

/// One verification check: which suite ran it, what it measured, and how far
/// the measurement was from the asserted identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub check: String,
    pub status: CheckStatus,
    pub max_error: f64,
    pub count: usize,
    pub details: String,
    pub paper_anchor: String,
}

impl CheckResult {
    pub fn new(
        suite: &str,
        check: &str,
        status: CheckStatus,
        max_error: f64,
        count: usize,
        details: String,
        paper_anchor: &str,
    ) -> Self {
        CheckResult {
            suite: suite.to_string(),
            check: check.to_string(),
            status,
            max_error,
            count,
            details,
            paper_anchor: paper_anchor.to_string(),
        }
    }
}

/// A full run: the echoed config and every check result, with summary
/// counts. Serialization is deterministic (no timestamps, map keys sorted).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub findings: usize,
}

impl Report {
    pub fn new(config: RunConfig, results: Vec<CheckResult>) -> Self {
        let passed = results.iter().filter(|r| r.status == CheckStatus::Pass).count();
        let failed = results.iter().filter(|r| r.status == CheckStatus::Fail).count();
        let findings = results.iter().filter(|r| r.status == CheckStatus::Finding).count();
        Report { config, results, passed, failed, findings }
    }

    pub fn has_failures(&self) -> bool {
        self.failed > 0
    }
}
