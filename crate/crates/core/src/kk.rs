//! First-order expansion of the price in the rate volatility η around the
//! deterministic rate path `φ(s) = r0 e^{-γs} + θ(1 - e^{-γs})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{Contract, MarketSpec};
use crate::math::{norm_cdf, norm_pdf};
use crate::rates::CirParams;

/// Below this initial rate the λ_K logarithm is numerically meaningless.
pub const KK_MIN_R0: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KkTerms {
    /// `∫_0^T φ(s) ds`
    pub phi_int: f64,
    pub c1: f64,
    pub d1_kk: f64,
    pub d2_kk: f64,
    pub gamma_k: f64,
    pub lambda_k: f64,
}

/// The expansion terms. η only enters the price linearly, so it may be zero
/// here even though [`CirParams::new`] rejects it.
pub fn kk_terms(m: &MarketSpec, c: &Contract, p: &CirParams) -> Result<KkTerms> {
    m.validate()?;
    c.validate()?;
    if !(p.gamma_rev > 0.0) || !(p.eta >= 0.0) || !p.eta.is_finite() {
        return Err(Error::invalid(format!("need gamma_rev > 0 and eta >= 0, got {p:?}")));
    }
    if !(p.r0 >= KK_MIN_R0) || !(p.theta > 0.0) {
        return Err(Error::Domain(format!(
            "expansion needs r0 >= {KK_MIN_R0} and theta > 0, got r0={}, theta={}",
            p.r0, p.theta
        )));
    }
    let (g, th, r, t, s) = (p.gamma_rev, p.theta, p.r0, c.maturity, m.sigma);
    let phi_int = th * t + (r - th) * (-(-g * t).exp_m1()) / g;
    let sd = s * t.sqrt();
    let d1_kk = (m.x - c.log_strike + phi_int + 0.5 * s * s * t) / sd;
    let d2_kk = d1_kk - sd;

    let eg = (g * t).exp();
    let (sr, sth) = (r.sqrt(), th.sqrt());
    let gamma_k = (0.5 * g * t).exp() * (r - th * (1.0 - eg)).sqrt();
    let lambda_k = ((sr + sth).powi(2) / (r - th * (1.0 - 2.0 * eg) + 2.0 * gamma_k * sth)).ln();
    let c1 = -m.rho / (s * t)
        * (2.0 * sth * ((1.0 + 2.0 * eg) * sr - 3.0 * gamma_k) + (r - th * (1.0 + 2.0 * eg)) * lambda_k)
        / (2.0 * eg * g * g * sth);
    let terms = KkTerms { phi_int, c1, d1_kk, d2_kk, gamma_k, lambda_k };
    if [phi_int, c1, d1_kk, gamma_k, lambda_k].iter().all(|v| v.is_finite()) {
        Ok(terms)
    } else {
        Err(Error::Numerical(format!("non-finite expansion terms {terms:?}")))
    }
}

/// `u = e^x N(d1) - e^{κ-∫φ} N(d2) + η C1 [d2 e^x N'(d1) - d1 e^{κ-∫φ} N'(d2)]`.
pub fn kk_price(m: &MarketSpec, c: &Contract, p: &CirParams) -> Result<f64> {
    let k = kk_terms(m, c, p)?;
    let spot = m.x.exp();
    let disc_strike = (c.log_strike - k.phi_int).exp();
    let zeroth = spot * norm_cdf(k.d1_kk) - disc_strike * norm_cdf(k.d2_kk);
    let first = k.d2_kk * spot * norm_pdf(k.d1_kk) - k.d1_kk * disc_strike * norm_pdf(k.d2_kk);
    Ok(zeroth + p.eta * k.c1 * first)
}
