//! Affine approximation: the state-dependent covariance `ρσ η √r_t` is
//! replaced by `ρσ η (a + b e^{-ct})`, which makes the joint log-price/rate
//! transform exponential-affine. Prices come from a damped Fourier inversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{Contract, MarketSpec};
use crate::math::{Integrator, INVERSION_TOL, MOMENT_TOL};
use crate::rates::{CirParams, SqrtMeanFit};

/// Time variable fed to the square-root mean curve inside the transform
/// integral `∫_0^T (γθ + ρσηζ m(·)) C(ζ, s) ds`, where `s` is time to maturity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SqrtMeanClock {
    /// `m(s)`: the curve evaluated at the integration variable itself.
    Backward,
    /// `m(T - s)`: the curve evaluated at calendar time.
    Calendar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoSettings {
    /// Damping ν < 0; the transform is evaluated on `Re ζ = 1 - ν`.
    pub damping: f64,
    pub clock: SqrtMeanClock,
    /// Absolute tolerance of the inversion integral.
    pub tol: f64,
}

impl Default for GoSettings {
    fn default() -> Self {
        Self { damping: DEFAULT_DAMPING, clock: SqrtMeanClock::Backward, tol: INVERSION_TOL }
    }
}

pub const DEFAULT_DAMPING: f64 = -1.5;
/// The inversion integrand is truncated once its modulus falls below this.
pub const ENVELOPE_CUTOFF: f64 = 1e-12;
/// Largest admissible truncation point of the inversion integral.
pub const MAX_FREQUENCY: f64 = 2000.0;

/// Riccati constants at transform argument ζ:
/// `d = √(γ² + 2η²(1 - ζ))` (principal branch), `g = (γ - d)/(γ + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoTransformParams {
    pub zeta: Complex64,
    pub d_go: Complex64,
    pub g_go: Complex64,
}

impl GoTransformParams {
    pub fn new(zeta: Complex64, p: &CirParams) -> Self {
        let g = p.gamma_rev;
        let d_go = (g * g + 2.0 * p.eta * p.eta * (1.0 - zeta)).sqrt();
        Self { zeta, d_go, g_go: (g - d_go) / (g + d_go) }
    }

    /// Rate loading `C(ζ, τ) = (γ - d)/η² (1 - e^{-dτ})/(1 - g e^{-dτ})`,
    /// written as `-2(1 - ζ)/(γ + d) ...` so that η → 0 is harmless.
    pub fn c(&self, p: &CirParams, tau: f64) -> Complex64 {
        let e = (-self.d_go * tau).exp();
        let k = -2.0 * (1.0 - self.zeta) / (p.gamma_rev + self.d_go);
        k * (1.0 - e) / (1.0 - self.g_go * e)
    }
}

/// Discounted transform `E[e^{-Λ_T} e^{ζ X_T}]` at the backward clock.
pub fn go_char_fn(zeta: Complex64, m: &MarketSpec, p: &CirParams, fit: &SqrtMeanFit, t: f64) -> Result<Complex64> {
    go_char_fn_with(zeta, m, p, fit, t, SqrtMeanClock::Backward)
}

/// `φ(ζ) = exp(A(ζ,T) + ζx + C(ζ,T) r0)` with
/// `A = σ²T(ζ² - ζ)/2 + ∫_0^T (γθ + ρσηζ m(s)) C(ζ,s) ds`.
pub fn go_char_fn_with(
    zeta: Complex64,
    m: &MarketSpec,
    p: &CirParams,
    fit: &SqrtMeanFit,
    t: f64,
    clock: SqrtMeanClock,
) -> Result<Complex64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be >= 0, got {t}")));
    }
    let tp = GoTransformParams::new(zeta, p);
    let corr = m.rho * m.sigma * p.eta * zeta;
    let level = p.gamma_rev * p.theta;
    let curve = |s: f64| match clock {
        SqrtMeanClock::Backward => fit.value(s),
        SqrtMeanClock::Calendar => fit.value(t - s),
    };
    let integral = Integrator::new(MOMENT_TOL)
        .integrate(|s| (corr * curve(s) + level) * tp.c(p, s), 0.0, t)
        .map_err(|e| Error::Numerical(format!("transform integral failed at zeta = {zeta}: {e}")))?
        .value;
    let a = 0.5 * m.sigma * m.sigma * t * (zeta * zeta - zeta) + integral;
    let value = (a + zeta * m.x + tp.c(p, t) * p.r0).exp();
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical(format!("transform not finite at zeta = {zeta}")))
    }
}

/// Price with the default clock and tolerance.
pub fn go_price(m: &MarketSpec, c: &Contract, p: &CirParams, fit: &SqrtMeanFit, damping: f64) -> Result<f64> {
    go_price_with(m, c, p, fit, &GoSettings { damping, ..GoSettings::default() })
}

/// `u = (1/π) ∫_0^∞ Re[e^{wκ} φ(1 - w) / (w(w - 1))] du`, `w = ν - iu`.
pub fn go_price_with(m: &MarketSpec, c: &Contract, p: &CirParams, fit: &SqrtMeanFit, s: &GoSettings) -> Result<f64> {
    m.validate()?;
    c.validate()?;
    p.validate()?;
    let nu = s.damping;
    if !(nu < 0.0) || !nu.is_finite() {
        return Err(Error::invalid(format!("damping must be < 0, got {nu}")));
    }
    if !(s.tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be > 0, got {}", s.tol)));
    }
    if p.gamma_rev * p.gamma_rev + 2.0 * p.eta * p.eta * nu <= 0.0 {
        return Err(Error::Domain(format!(
            "damping {nu} too strong for the rate transform (gamma^2 + 2 eta^2 nu <= 0)"
        )));
    }
    let t = c.maturity;
    let kappa = c.log_strike;
    let term = |u: f64| -> Result<Complex64> {
        let w = Complex64::new(nu, -u);
        let phi = go_char_fn_with(1.0 - w, m, p, fit, t, s.clock)?;
        Ok((w * kappa).exp() * phi / (w * (w - 1.0)))
    };

    let mut upper = 8.0;
    loop {
        if term(upper)?.norm() < ENVELOPE_CUTOFF {
            break;
        }
        if upper >= MAX_FREQUENCY {
            return Err(Error::Numerical(format!(
                "inversion integrand still above {ENVELOPE_CUTOFF:e} at u = {MAX_FREQUENCY}"
            )));
        }
        upper = (2.0 * upper).min(MAX_FREQUENCY);
    }

    let failed = std::cell::Cell::new(None);
    let integral = Integrator::new(s.tol).integrate(
        |u| match term(u) {
            Ok(v) => v.re,
            Err(e) => {
                let prev = failed.take();
                failed.set(prev.or(Some(e)));
                0.0
            }
        },
        0.0,
        upper,
    );
    if let Some(e) = failed.take() {
        return Err(e);
    }
    let price = integral?.value / std::f64::consts::PI;
    if price < -10.0 * s.tol {
        return Err(Error::Numerical(format!("inversion produced a negative price {price:e}")));
    }
    Ok(price.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{cir_bond_price, cir_mean_lambda, cir_sqrt_mean_fit};

    fn table() -> CirParams {
        CirParams::new(0.6, 0.02, 0.1, 0.001).unwrap()
    }

    #[test]
    fn zero_argument_is_the_bond() {
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        for (rho, t) in [(0.0, 1.0), (0.6, 5.0), (-0.9, 2.0)] {
            let m = MarketSpec::from_spot(100.0, 0.3, rho).unwrap();
            let v = go_char_fn(Complex64::new(0.0, 0.0), &m, &p, &fit, t).unwrap();
            assert!((v.re - cir_bond_price(&p, t).unwrap()).abs() < 1e-8);
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn martingale_identity() {
        // φ(1) = E[e^{-Λ} S_T] = S_0
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        let m = MarketSpec::from_spot(100.0, 0.3, 0.5).unwrap();
        let v = go_char_fn(Complex64::new(1.0, 0.0), &m, &p, &fit, 3.0).unwrap();
        assert!((v.re / 100.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn deterministic_rate_limit() {
        let p = CirParams::new(0.6, 0.02, 1e-7, 0.001).unwrap();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        let m = MarketSpec::from_spot(100.0, 0.2, 0.5).unwrap();
        let t = 2.0;
        let l = cir_mean_lambda(&p, t).unwrap();
        let s2t = m.sigma * m.sigma * t;
        for z in [-0.5, 0.5, 2.0] {
            let v = go_char_fn(Complex64::new(z, 0.0), &m, &p, &fit, t).unwrap();
            let expect = (-l + z * (m.x + l - 0.5 * s2t) + 0.5 * z * z * s2t).exp();
            assert!((v.re / expect - 1.0).abs() < 1e-6, "z={z}");
        }
    }

    #[test]
    fn modulus_bounded_on_contour() {
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        let m = MarketSpec::from_spot(100.0, 0.2, -0.6).unwrap();
        let at0 = go_char_fn(Complex64::new(2.5, 0.0), &m, &p, &fit, 1.0).unwrap().re;
        for u in [0.1, 1.0, 5.0, 20.0] {
            let v = go_char_fn(Complex64::new(2.5, u), &m, &p, &fit, 1.0).unwrap();
            assert!(v.norm() <= at0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn published_cells_and_damping_invariance() {
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        assert!((go_price(&m, &c, &p, &fit, -1.5).unwrap() - 8.2315).abs() < 1e-3);
        let m = MarketSpec::from_spot(100.0, 0.2, -0.9).unwrap();
        let base = go_price(&m, &c, &p, &fit, -1.5).unwrap();
        assert!((base - 8.1192).abs() < 1e-3);
        for nu in [-0.75, -3.0] {
            assert!((go_price(&m, &c, &p, &fit, nu).unwrap() - base).abs() < 1e-6);
        }
        let p8 = CirParams::new(0.58, 0.0345, 0.04, 0.001).unwrap();
        let fit8 = cir_sqrt_mean_fit(&p8).unwrap();
        let m8 = MarketSpec::from_spot(100.0, 0.4, 0.2).unwrap();
        let c8 = Contract::from_strike(100.0, 5.0).unwrap();
        assert!((go_price(&m8, &c8, &p8, &fit8, -1.5).unwrap() - 38.5505).abs() < 1e-3);
    }

    #[test]
    fn invalid_damping() {
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        assert!(go_price(&m, &c, &p, &fit, 0.0).unwrap_err().is_invalid_input());
        assert!(go_price(&m, &c, &p, &fit, 0.5).unwrap_err().is_invalid_input());
        let wild = CirParams::new(0.1, 0.02, 1.0, 0.001).unwrap();
        let fit = cir_sqrt_mean_fit(&wild).unwrap();
        assert!(matches!(go_price(&m, &c, &wild, &fit, -1.5), Err(Error::Domain(_))));
    }
}
