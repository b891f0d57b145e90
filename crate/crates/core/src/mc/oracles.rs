//! Brute-force Monte Carlo estimates of the rate moments.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::estimators::mean_and_se;
use super::paths::{simulate_paths_with, Observables};
use crate::error::Result;
use crate::rates::{CirParams, GenericRateModel, FIT_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// `|value - target|` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.value - target).abs() / self.std_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentOracles {
    pub maturity: f64,
    pub lambda: Estimate,
    pub var_lambda: Estimate,
    pub cross_bl: Estimate,
    pub epsilon: Estimate,
    pub bond: Estimate,
    /// `(t, E[√r_t])` on the fit grid points not beyond the maturity.
    pub sqrt_mean: Vec<(f64, Estimate)>,
}

fn estimate(xs: &[f64]) -> Estimate {
    let (value, std_error) = mean_and_se(xs);
    Estimate { value, std_error }
}

/// Moment estimates from plain sampling (antithetic and control-variate
/// flags are ignored so that every path is an independent draw).
pub fn moment_oracles(p: &CirParams, maturity: f64, cfg: &SimConfig) -> Result<MomentOracles> {
    p.validate()?;
    let cfg = SimConfig { antithetic: false, control_variate: false, ..*cfg };
    cfg.require_ci_paths()?;
    let q = *p;
    let obs = Observables {
        kernel: Some(Arc::new(move |s| q.bond_b(maturity - s))),
        snapshots: FIT_GRID.iter().copied().filter(|&t| t <= maturity).collect(),
    };
    let set = simulate_paths_with(&GenericRateModel::cir(*p), maturity, &cfg, &obs)?;
    let lam: Vec<f64> = set.paths.iter().map(|x| x.lambda_t).collect();
    let lambda = estimate(&lam);

    let n = lam.len() as f64;
    let centred: Vec<f64> = lam.iter().map(|v| (v - lambda.value).powi(2)).collect();
    let m2 = centred.iter().sum::<f64>() / n;
    let m4 = centred.iter().map(|v| v * v).sum::<f64>() / n;
    let var_lambda = Estimate { value: m2 * n / (n - 1.0), std_error: ((m4 - m2 * m2).max(0.0) / n).sqrt() };

    let cross: Vec<f64> = set.paths.iter().map(|x| x.b1_t * x.lambda_t).collect();
    let eps: Vec<f64> = set.paths.iter().map(|x| -p.eta * x.kernel_integral).collect();
    let bond: Vec<f64> = lam.iter().map(|v| (-v).exp()).collect();
    let sqrt_mean = set
        .snapshot_times
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let xs: Vec<f64> = (0..set.len()).map(|i| set.snapshot(i, j)).collect();
            (t, estimate(&xs))
        })
        .collect();
    Ok(MomentOracles {
        maturity,
        lambda,
        var_lambda,
        cross_bl: estimate(&cross),
        epsilon: estimate(&eps),
        bond: estimate(&bond),
        sqrt_mean,
    })
}
