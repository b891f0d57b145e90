use serde::{Deserialize, Serialize};

use super::cir::{cir_bond_price, cir_mean_lambda, cir_var_lambda, CirParams};
use super::sqrt_mean::{cir_cross_moment_with, cir_epsilon_with, cir_sqrt_mean_fit, SqrtMeanCurve};
use crate::error::{Error, Result};

/// Rate-side constants consumed by the moment-matching price. Built once per
/// (rate parameters, maturity) and reused across strikes, spots and
/// correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentBundle {
    pub maturity: f64,
    /// `λ(T) = E[Λ_T]`
    pub lambda_t: f64,
    pub var_lambda: f64,
    /// `E[B¹_T Λ_T]`
    pub cross_bl: f64,
    /// `ε(T)`
    pub epsilon_t: f64,
    /// `P(0,T)`
    pub bond_0t: f64,
}

impl MomentBundle {
    /// Replace the model bond price by an observed one.
    pub fn with_market_bond(mut self, bond: f64) -> Result<Self> {
        if !(bond > 0.0) || !bond.is_finite() {
            return Err(Error::invalid(format!("bond price must be > 0, got {bond}")));
        }
        self.bond_0t = bond;
        Ok(self)
    }
}

/// Bundle with the fitted square-root mean.
pub fn cir_moment_bundle(p: &CirParams, t: f64) -> Result<MomentBundle> {
    let fit = cir_sqrt_mean_fit(p)?;
    cir_moment_bundle_with(p, t, &SqrtMeanCurve::Fitted(fit))
}

pub fn cir_moment_bundle_with(p: &CirParams, t: f64, curve: &SqrtMeanCurve) -> Result<MomentBundle> {
    p.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be > 0, got {t}")));
    }
    Ok(MomentBundle {
        maturity: t,
        lambda_t: cir_mean_lambda(p, t)?,
        var_lambda: cir_var_lambda(p, t)?,
        cross_bl: cir_cross_moment_with(p, curve, t)?,
        epsilon_t: cir_epsilon_with(p, curve, t)?,
        bond_0t: cir_bond_price(p, t)?,
    })
}
