use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DESK_PATHS: usize = 100_000;
pub const FULL_PATHS: usize = 1_000_000;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Minimum path count for estimators that report a standard error.
pub const MIN_CI_PATHS: usize = 100;

/// Simulation settings.
///
/// With `antithetic` every stream drives a pair of paths (`Z` and `-Z`), so
/// `n_paths` must be even. `control_variate` only affects the conditional
/// price estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub antithetic: bool,
    pub control_variate: bool,
}

impl SimConfig {
    /// Plain Monte Carlo.
    pub fn plain(n_paths: usize, dt: f64, seed: u64) -> Self {
        Self { n_paths, dt, seed, antithetic: false, control_variate: false }
    }

    /// 1e5 paths, dt = 1e-3, antithetic pairs and the control variate.
    pub fn desk(seed: u64) -> Self {
        Self { n_paths: DESK_PATHS, dt: DEFAULT_DT, seed, antithetic: true, control_variate: true }
    }

    /// 1e6 plain paths, dt = 1e-3.
    pub fn full(seed: u64) -> Self {
        Self::plain(FULL_PATHS, DEFAULT_DT, seed)
    }

    pub fn validate(&self, maturity: f64) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::invalid("n_paths must be > 0"));
        }
        if self.antithetic && self.n_paths % 2 != 0 {
            return Err(Error::invalid(format!("antithetic sampling needs an even path count, got {}", self.n_paths)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(maturity > 0.0) || !maturity.is_finite() {
            return Err(Error::invalid(format!("maturity must be > 0, got {maturity}")));
        }
        if self.dt > maturity * (1.0 + 1e-12) {
            return Err(Error::invalid(format!("dt = {} exceeds the maturity {maturity}", self.dt)));
        }
        Ok(())
    }

    /// Number of Euler steps; the step is then `maturity / n_steps`.
    pub fn n_steps(&self, maturity: f64) -> usize {
        ((maturity / self.dt).round() as usize).max(1)
    }

    pub(crate) fn require_ci_paths(&self) -> Result<()> {
        if self.n_paths < MIN_CI_PATHS {
            return Err(Error::invalid(format!(
                "estimators with a standard error need at least {MIN_CI_PATHS} paths, got {}",
                self.n_paths
            )));
        }
        Ok(())
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::desk(DEFAULT_SEED)
    }
}
