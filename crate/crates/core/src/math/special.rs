//! Standard normal distribution helpers and the Gaussian expectation
//! `E[e^{pX} N(X)]` used by the moment-matching price.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::{Deserialize, Serialize};
use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal cumulative distribution function.
///
/// Evaluated through the complementary error function so that both tails
/// keep full relative precision (`norm_cdf(-40)` is a denormal-free tiny
/// number rather than `0.5 - 0.5`).
#[inline]
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn norm_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Inverse of [`norm_cdf`] on `(0, 1)`: the inverse-erfc starting point is
/// polished with one Newton step against [`norm_cdf`].
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let z = -SQRT_2 * erfc_inv(2.0 * p);
    let dens = norm_pdf(z);
    if dens > 0.0 {
        z - (norm_cdf(z) - p) / dens
    } else {
        z
    }
}

/// A Gaussian law `N(mu, nu^2)`. `nu == 0` is a point mass at `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLaw {
    pub mu: f64,
    pub nu: f64,
}

impl GaussianLaw {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !mu.is_finite() || !nu.is_finite() {
            return Err(Error::invalid(format!("gaussian law needs finite parameters, got ({mu}, {nu})")));
        }
        if nu < 0.0 {
            return Err(Error::invalid(format!("standard deviation must be >= 0, got {nu}")));
        }
        Ok(Self { mu, nu })
    }

    pub fn standard() -> Self {
        Self { mu: 0.0, nu: 1.0 }
    }

    pub fn variance(&self) -> f64 {
        self.nu * self.nu
    }
}

/// `E[e^{pX} N(X)]` for `X ~ N(mu, nu^2)`:
///
/// ```text
/// exp(p mu + (p nu)^2 / 2) * N((mu + p nu^2) / sqrt(1 + nu^2))
/// ```
///
/// For `nu = 0` this collapses to `e^{p mu} N(mu)`.
pub fn lemma1_expectation(p: f64, law: GaussianLaw) -> f64 {
    let GaussianLaw { mu, nu } = law;
    let var = nu * nu;
    (p * mu + 0.5 * p * p * var).exp() * norm_cdf((mu + p * var) / (1.0 + var).sqrt())
}
