//! Price estimators on simulated rate paths.

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::paths::{simulate_paths, PathSet};
use crate::error::{Error, Result};
use crate::market::{Contract, MarketSpec};
use crate::math::{lemma1_expectation, norm_cdf, GaussianLaw};
use crate::mm::conditional_coefficients;
use crate::rates::GenericRateModel;

/// Half-width multiplier of the reported 95% confidence interval.
pub const CI_Z: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceEstimate {
    pub value: f64,
    pub std_error: f64,
    /// `1.96 * std_error`
    pub ci_halfwidth: f64,
    /// Independent samples behind the estimate (pairs when antithetic).
    pub n_effective: usize,
}

impl PriceEstimate {
    fn from_samples(samples: &[f64]) -> Self {
        let (mean, se) = mean_and_se(samples);
        Self { value: mean, std_error: se, ci_halfwidth: CI_Z * se, n_effective: samples.len() }
    }
}

pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Averages antithetic partners so that the remaining samples are independent.
fn pair_average(xs: Vec<f64>, antithetic: bool) -> Vec<f64> {
    if antithetic {
        xs.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
    } else {
        xs
    }
}

fn check_maturity(paths: &PathSet, c: &Contract) -> Result<()> {
    if (paths.maturity - c.maturity).abs() > 1e-12 * c.maturity.max(1.0) {
        return Err(Error::invalid(format!(
            "paths simulated to T={} used for a contract with T={}",
            paths.maturity, c.maturity
        )));
    }
    if paths.len() < 2 {
        return Err(Error::invalid("need at least two paths"));
    }
    Ok(())
}

/// Conditional Black–Scholes value given `Λ_T = lambda` and `B¹_T = b`:
/// `e^{x - σ²ρ²T/2 + σρb} N(d1) - e^{κ - lambda} N(d2)`.
struct Conditional {
    x: f64,
    kappa: f64,
    sig_rho: f64,
    shift: f64,
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    gamma: f64,
}

impl Conditional {
    fn new(m: &MarketSpec, c: &Contract) -> Self {
        let (alpha1, alpha2, beta, gamma) = conditional_coefficients(m, c);
        let t = c.maturity;
        Self {
            x: m.x,
            kappa: c.log_strike,
            sig_rho: m.sigma * m.rho,
            shift: 0.5 * m.sigma * m.sigma * m.rho * m.rho * t,
            alpha1,
            alpha2,
            beta,
            gamma,
        }
    }

    #[inline]
    fn value(&self, lambda: f64, b: f64) -> f64 {
        let common = self.beta * b + self.gamma * lambda;
        (self.x - self.shift + self.sig_rho * b).exp() * norm_cdf(self.alpha1 + common)
            - (self.kappa - lambda).exp() * norm_cdf(self.alpha2 + common)
    }

    /// Exact mean of `value(ell, B)` for `B ~ N(0, T)`.
    fn mean_at(&self, ell: f64, t: f64) -> f64 {
        let mu1 = self.alpha1 + self.gamma * ell;
        let mu2 = self.alpha2 + self.gamma * ell;
        let nu = self.beta.abs() * t.sqrt();
        // σρB = p (X - mu1) with X = mu1 + βB
        let p = 1.0 / self.gamma;
        let law = GaussianLaw { mu: mu1, nu };
        let first = (self.x - self.shift - p * mu1).exp() * lemma1_expectation(p, law);
        let second = (self.kappa - ell).exp() * norm_cdf(mu2 / (1.0 + nu * nu).sqrt());
        first - second
    }
}

/// Conditional estimator on precomputed paths. With `control_variate` the
/// conditional value at the noiseless `Λ` is used as control; its mean is
/// exact, so the estimator stays unbiased up to the `O(1/n)` effect of the
/// estimated coefficient.
pub fn estimate_conditional(paths: &PathSet, m: &MarketSpec, c: &Contract, control_variate: bool) -> Result<PriceEstimate> {
    m.validate()?;
    c.validate()?;
    check_maturity(paths, c)?;
    let f = Conditional::new(m, c);
    let v = pair_average(paths.paths.iter().map(|p| f.value(p.lambda_t, p.b1_t)).collect(), paths.antithetic);
    if !control_variate {
        return Ok(PriceEstimate::from_samples(&v));
    }
    let ell = paths.noiseless_lambda;
    let h = pair_average(paths.paths.iter().map(|p| f.value(ell, p.b1_t)).collect(), paths.antithetic);
    let mean_h = f.mean_at(ell, c.maturity);
    let n = v.len() as f64;
    let (vbar, hbar) = (v.iter().sum::<f64>() / n, h.iter().sum::<f64>() / n);
    let (mut cov, mut var) = (0.0, 0.0);
    for (a, b) in v.iter().zip(&h) {
        cov += (a - vbar) * (b - hbar);
        var += (b - hbar) * (b - hbar);
    }
    let coef = if var > 1e-300 && (cov / var).is_finite() { cov / var } else { 0.0 };
    let w: Vec<f64> = v.iter().zip(&h).map(|(a, b)| a - coef * (b - mean_h)).collect();
    Ok(PriceEstimate::from_samples(&w))
}

/// Conditional Black–Scholes Monte Carlo price.
pub fn mc_price_conditional(m: &MarketSpec, c: &Contract, model: &GenericRateModel, cfg: &SimConfig) -> Result<PriceEstimate> {
    cfg.require_ci_paths()?;
    m.validate()?;
    c.validate()?;
    let paths = simulate_paths(model, c.maturity, cfg)?;
    estimate_conditional(&paths, m, c, cfg.control_variate)
}

/// Payoff estimator on precomputed paths: `X_T` is rebuilt from `Λ_T`, `B¹_T`
/// and the independent normal, and `e^{-Λ_T}(e^{X_T} - e^κ)⁺` is averaged.
pub fn estimate_direct(paths: &PathSet, m: &MarketSpec, c: &Contract) -> Result<PriceEstimate> {
    m.validate()?;
    c.validate()?;
    check_maturity(paths, c)?;
    let t = c.maturity;
    let perp = m.sigma * (1.0 - m.rho * m.rho).sqrt() * t.sqrt();
    let strike = c.log_strike.exp();
    let v = paths
        .paths
        .iter()
        .map(|p| {
            let xt = m.x + p.lambda_t - 0.5 * m.sigma * m.sigma * t + m.sigma * m.rho * p.b1_t + perp * p.z_perp;
            (-p.lambda_t).exp() * (xt.exp() - strike).max(0.0)
        })
        .collect();
    Ok(PriceEstimate::from_samples(&pair_average(v, paths.antithetic)))
}

pub fn mc_price_direct(m: &MarketSpec, c: &Contract, model: &GenericRateModel, cfg: &SimConfig) -> Result<PriceEstimate> {
    cfg.require_ci_paths()?;
    m.validate()?;
    c.validate()?;
    let paths = simulate_paths(model, c.maturity, cfg)?;
    estimate_direct(&paths, m, c)
}

/// Per-path `d_i = α_i + β B¹_T + γ Λ_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DSamples {
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

pub fn d_samples_from(paths: &PathSet, m: &MarketSpec, c: &Contract) -> Result<DSamples> {
    m.validate()?;
    c.validate()?;
    check_maturity(paths, c)?;
    let (a1, a2, beta, gamma) = conditional_coefficients(m, c);
    let common: Vec<f64> = paths.paths.iter().map(|p| beta * p.b1_t + gamma * p.lambda_t).collect();
    Ok(DSamples { d1: common.iter().map(|v| a1 + v).collect(), d2: common.iter().map(|v| a2 + v).collect() })
}

pub fn sample_d_variables(m: &MarketSpec, c: &Contract, model: &GenericRateModel, cfg: &SimConfig) -> Result<DSamples> {
    let paths = simulate_paths(model, c.maturity, cfg)?;
    d_samples_from(&paths, m, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::bs_call_deterministic;
    use crate::rates::{cir_mean_lambda, CirParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn control_mean_is_exact() {
        let m = MarketSpec::from_spot(100.0, 0.3, -0.7).unwrap();
        let c = Contract::from_strike(90.0, 2.0).unwrap();
        let f = Conditional::new(&m, &c);
        let ell = 0.05;
        let law = Normal::new(0.0, 2f64.sqrt()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..400_000).map(|_| f.value(ell, law.sample(&mut rng))).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - f.mean_at(ell, 2.0)).abs() < 3.0 * se, "{mean} {} {se}", f.mean_at(ell, 2.0));
    }

    #[test]
    fn zero_correlation_control_mean_is_black_scholes() {
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        let f = Conditional::new(&m, &c);
        assert!((f.mean_at(0.02, 1.0) - bs_call_deterministic(&m, &c, 0.02)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_rate_matches_black_scholes() {
        let p = CirParams::new(0.6, 0.02, 1e-9, 0.001).unwrap();
        let model = GenericRateModel::cir(p);
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        let bs = bs_call_deterministic(&m, &c, cir_mean_lambda(&p, 1.0).unwrap());
        let cfg = SimConfig::plain(20_000, 1e-3, 9);
        let paths = simulate_paths(&model, 1.0, &cfg).unwrap();
        let cond = estimate_conditional(&paths, &m, &c, false).unwrap();
        // Euler bias on Λ is O(dt) and tiny; price noise vanishes with ρ = 0
        assert!((cond.value - bs).abs() < 1e-3, "{} vs {bs}", cond.value);
        let direct = estimate_direct(&paths, &m, &c).unwrap();
        assert!((direct.value - bs).abs() < 3.0 * direct.std_error + 1e-3);
    }

    #[test]
    fn requires_enough_paths() {
        let model = GenericRateModel::cir(CirParams::new(0.6, 0.02, 0.1, 0.001).unwrap());
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        assert!(mc_price_conditional(&m, &c, &model, &SimConfig::plain(50, 1e-2, 1)).unwrap_err().is_invalid_input());
        let paths = simulate_paths(&model, 1.0, &SimConfig::plain(200, 1e-2, 1)).unwrap();
        assert!(estimate_conditional(&paths, &m, &Contract::from_strike(100.0, 2.0).unwrap(), false).is_err());
    }
}
