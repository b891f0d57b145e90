//! Gaussian moment-matching price.
//!
//! Conditionally on the rate filtration the call is a Black–Scholes price in
//! `d_i = α_i + β B¹_T + γ Λ_T`. Each `d_i` is replaced by a Gaussian with the
//! same mean `α_i + γ λ(T)` and variance `β̂² T`, after which both
//! expectations are explicit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{bs_call_deterministic, Contract, MarketSpec};
use crate::math::norm_cdf;
use crate::rates::{cir_moment_bundle, CirParams, MomentBundle};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MmCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub gamma_coef: f64,
    /// Matched slope; carries the sign of ρ (positive at ρ = 0).
    pub beta_hat: f64,
    /// `β̂² T = β² T + γ² var(Λ_T) + 2βγ E[B¹_T Λ_T]`
    pub beta_hat_sq_t: f64,
}

/// Conditional Black–Scholes coefficients `α1, α2, β, γ` (without β̂).
pub(crate) fn conditional_coefficients(m: &MarketSpec, c: &Contract) -> (f64, f64, f64, f64) {
    let t = c.maturity;
    let s2t = m.sigma * m.sigma * t;
    let root = (1.0 - m.rho * m.rho).sqrt();
    let q = m.sigma * root * t.sqrt();
    let mny = m.x - c.log_strike;
    let alpha1 = (mny + 0.5 * s2t - m.rho * m.rho * s2t) / q;
    let alpha2 = (mny - 0.5 * s2t) / q;
    let beta = m.rho / (root * t.sqrt());
    (alpha1, alpha2, beta, 1.0 / q)
}

pub fn mm_coefficients(m: &MarketSpec, c: &Contract, bundle: &MomentBundle) -> Result<MmCoefficients> {
    m.validate()?;
    c.validate()?;
    if (bundle.maturity - c.maturity).abs() > 1e-12 * c.maturity.max(1.0) {
        return Err(Error::invalid(format!(
            "moment bundle built for T={} used with T={}",
            bundle.maturity, c.maturity
        )));
    }
    let t = c.maturity;
    let (alpha1, alpha2, beta, gamma_coef) = conditional_coefficients(m, c);
    let beta_hat_sq_t =
        beta * beta * t + gamma_coef * gamma_coef * bundle.var_lambda + 2.0 * beta * gamma_coef * bundle.cross_bl;
    if !(beta_hat_sq_t >= 0.0) {
        return Err(Error::Domain(format!(
            "matched variance beta_hat^2 T = {beta_hat_sq_t:e} is negative (inconsistent moments)"
        )));
    }
    let magnitude = (beta_hat_sq_t / t).sqrt();
    let beta_hat = if m.rho < 0.0 { -magnitude } else { magnitude };
    Ok(MmCoefficients { alpha1, alpha2, beta, gamma_coef, beta_hat, beta_hat_sq_t })
}

/// `ū = e^x N[(α1 + σρβ̂T + γλ)/√(1+β̂²T)] - e^κ P(0,T) N[(α2 + εβ̂ + γλ)/√(1+β̂²T)]`.
pub fn mm_price(m: &MarketSpec, c: &Contract, bundle: &MomentBundle) -> Result<f64> {
    let k = mm_coefficients(m, c, bundle)?;
    let t = c.maturity;
    let den = (1.0 + k.beta_hat_sq_t).sqrt();
    let gl = k.gamma_coef * bundle.lambda_t;
    let f = norm_cdf((k.alpha1 + m.sigma * m.rho * k.beta_hat * t + gl) / den);
    let g = norm_cdf((k.alpha2 + bundle.epsilon_t * k.beta_hat + gl) / den);
    Ok(m.x.exp() * f - c.log_strike.exp() * bundle.bond_0t * g)
}

/// Largest rate volatility accepted by [`mm_price_vs_bs_limit`].
pub const BS_LIMIT_MAX_ETA: f64 = 1e-6;

/// Gap between the moment-matching price and Black–Scholes with the
/// deterministic rate `E[r_t]`, for η ≤ 1e-6.
pub fn mm_price_vs_bs_limit(m: &MarketSpec, c: &Contract, p: &CirParams) -> Result<f64> {
    if p.eta > BS_LIMIT_MAX_ETA {
        return Err(Error::invalid(format!("limit check needs eta <= {BS_LIMIT_MAX_ETA}, got {}", p.eta)));
    }
    let bundle = cir_moment_bundle(p, c.maturity)?;
    let mm = mm_price(m, c, &bundle)?;
    Ok((mm - bs_call_deterministic(m, c, bundle.lambda_t)).abs())
}
