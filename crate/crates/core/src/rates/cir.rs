//! CIR short rate `dr = γ(θ - r)dt + η√r dB`: bond price and moments of the
//! integrated rate `Λ_T = ∫_0^T r_s ds`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{integrate, try_integrate, MOMENT_TOL};

/// CIR parameters. `gamma_rev` is the mean-reversion speed (the tables label
/// it κ, which elsewhere denotes the log-strike).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirParams {
    pub gamma_rev: f64,
    pub theta: f64,
    pub eta: f64,
    pub r0: f64,
}

impl CirParams {
    pub fn new(gamma_rev: f64, theta: f64, eta: f64, r0: f64) -> Result<Self> {
        let p = Self { gamma_rev, theta, eta, r0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be > 0, got {v}")))
            }
        };
        positive("gamma_rev", self.gamma_rev)?;
        positive("theta", self.theta)?;
        positive("eta", self.eta)?;
        if !(self.r0 >= 0.0) || !self.r0.is_finite() {
            return Err(Error::invalid(format!("r0 must be >= 0, got {}", self.r0)));
        }
        Ok(())
    }

    /// Feller condition `2γθ >= η²`. Reported only; the simulator copes either way.
    pub fn feller(&self) -> bool {
        2.0 * self.gamma_rev * self.theta >= self.eta * self.eta
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(self.gamma_rev, self.theta, eta, self.r0)
    }

    fn delta(&self) -> f64 {
        (self.gamma_rev * self.gamma_rev + 2.0 * self.eta * self.eta).sqrt()
    }

    /// `δ - γ`, computed without cancellation.
    fn delta_minus_gamma(&self) -> f64 {
        2.0 * self.eta * self.eta / (self.delta() + self.gamma_rev)
    }

    /// Bond B-function for time to maturity `tau`.
    pub fn bond_b(&self, tau: f64) -> f64 {
        let d = self.delta();
        let e = (-d * tau).exp();
        2.0 * (-(-d * tau).exp_m1()) / (self.delta_minus_gamma() * e + d + self.gamma_rev)
    }

    /// `ln A` for time to maturity `tau`, stable as η → 0.
    pub fn bond_ln_a(&self, tau: f64) -> f64 {
        let d = self.delta();
        let s = d + self.gamma_rev;
        let eps = self.delta_minus_gamma();
        let k = 2.0 * self.gamma_rev * self.theta / (self.eta * self.eta);
        k * ((eps / s).ln_1p() - 0.5 * eps * tau - (eps * (-d * tau).exp() / s).ln_1p())
    }

    /// `E[r_t]`.
    pub fn mean_rate(&self, t: f64) -> f64 {
        self.theta + (self.r0 - self.theta) * (-self.gamma_rev * t).exp()
    }

    /// `var(r_t) = c0 + c1 e^{-γt} + c2 e^{-2γt}`.
    pub fn var_rate(&self, t: f64) -> f64 {
        let [c0, c1, c2] = self.var_rate_coefficients();
        let e = (-self.gamma_rev * t).exp();
        c0 + c1 * e + c2 * e * e
    }

    fn var_rate_coefficients(&self) -> [f64; 3] {
        let g = self.gamma_rev;
        let h = self.eta * self.eta / g;
        [0.5 * self.theta * h, (self.r0 - self.theta) * h, (0.5 * self.theta - self.r0) * h]
    }
}

fn check_maturity(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("maturity must be >= 0, got {t}")))
    }
}

/// `(1 - e^{-x t}) / x`, continuous at `x = 0`.
pub(crate) fn one_minus_exp_over(x: f64, t: f64) -> f64 {
    if x == 0.0 {
        t
    } else {
        -(-x * t).exp_m1() / x
    }
}

/// Zero-coupon bond `P(0,T) = A e^{-r0 B}`.
pub fn cir_bond_price(p: &CirParams, t: f64) -> Result<f64> {
    check_maturity(t)?;
    Ok((p.bond_ln_a(t) - p.r0 * p.bond_b(t)).exp())
}

/// `λ(T) = E[Λ_T] = θT + (r0 - θ)(1 - e^{-γT})/γ`.
pub fn cir_mean_lambda(p: &CirParams, t: f64) -> Result<f64> {
    check_maturity(t)?;
    Ok(p.theta * t + (p.r0 - p.theta) * one_minus_exp_over(p.gamma_rev, t))
}

/// `var(Λ_T) = 2 ∫_0^T var(r_v) (1 - e^{-γ(T-v)})/γ dv`, using
/// `cov(r_s, r_v) = e^{-γ(s-v)} var(r_v)` for `v < s`. Closed form.
pub fn cir_var_lambda(p: &CirParams, t: f64) -> Result<f64> {
    check_maturity(t)?;
    let g = p.gamma_rev;
    let [c0, c1, c2] = p.var_rate_coefficients();
    let e1 = (-g * t).exp();
    let f1 = one_minus_exp_over(g, t);
    let k0 = t - f1;
    let k1 = f1 - t * e1;
    let k2 = one_minus_exp_over(2.0 * g, t) - e1 * f1;
    Ok((2.0 / g) * (c0 * k0 + c1 * k1 + c2 * k2).max(0.0))
}

/// Same quantity as [`cir_var_lambda`] by nested quadrature of
/// `2 ∫_0^T ∫_0^s e^{-γ(s-v)} var(r_v) dv ds`.
pub fn cir_var_lambda_quadrature(p: &CirParams, t: f64) -> Result<f64> {
    check_maturity(t)?;
    let g = p.gamma_rev;
    Ok(2.0 * nested_triangle(|s, v| (-g * (s - v)).exp() * p.var_rate(v), t, MOMENT_TOL * 0.5)?)
}

/// `∫_0^T ∫_0^s f(s, v) dv ds` by nested adaptive quadrature.
pub(crate) fn nested_triangle<F: Fn(f64, f64) -> f64>(f: F, t: f64, tol: f64) -> Result<f64> {
    let inner_tol = tol * 1e-2 / t.max(1.0);
    try_integrate(|s| integrate(|v| f(s, v), 0.0, s, inner_tol), 0.0, t, tol)
}
