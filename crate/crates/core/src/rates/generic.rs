//! Short-rate dynamics for the simulator.

use std::fmt;
use std::sync::Arc;

use super::cir::CirParams;
use crate::error::{Error, Result};

pub type RateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `dr = μ(t, r) dt + η(t, r) dB`.
#[derive(Clone)]
pub enum RateDynamics {
    Cir(CirParams),
    /// `dr = r(θ - a ln r) dt + η r dB`
    ExpVasicek { theta: f64, a: f64, eta: f64 },
    /// `dr = a r dt + η r dB`
    Dothan { a: f64, eta: f64 },
    Custom { label: String, drift: RateFn, diffusion: RateFn },
}

impl fmt::Debug for RateDynamics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateDynamics::Cir(p) => f.debug_tuple("Cir").field(p).finish(),
            RateDynamics::ExpVasicek { theta, a, eta } => f
                .debug_struct("ExpVasicek")
                .field("theta", theta)
                .field("a", a)
                .field("eta", eta)
                .finish(),
            RateDynamics::Dothan { a, eta } => f.debug_struct("Dothan").field("a", a).field("eta", eta).finish(),
            RateDynamics::Custom { label, .. } => f.debug_struct("Custom").field("label", label).finish_non_exhaustive(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Cir,
    ExpVasicek,
    Dothan,
    Custom,
}

impl ModelTag {
    pub fn name(self) -> &'static str {
        match self {
            ModelTag::Cir => "cir",
            ModelTag::ExpVasicek => "exp-vasicek",
            ModelTag::Dothan => "dothan",
            ModelTag::Custom => "custom",
        }
    }
}

/// A short-rate model: dynamics plus initial rate. The simulator evaluates
/// drift and diffusion at the truncated rate `max(r, 0)`.
#[derive(Debug, Clone)]
pub struct GenericRateModel {
    pub dynamics: RateDynamics,
    pub r0: f64,
}

impl GenericRateModel {
    pub fn cir(p: CirParams) -> Self {
        Self { dynamics: RateDynamics::Cir(p), r0: p.r0 }
    }

    pub fn exp_vasicek(theta: f64, a: f64, eta: f64, r0: f64) -> Result<Self> {
        if !(eta >= 0.0) || !theta.is_finite() || !a.is_finite() || !(r0 > 0.0) {
            return Err(Error::invalid(format!(
                "exponential Vasicek needs eta >= 0 and r0 > 0, got theta={theta}, a={a}, eta={eta}, r0={r0}"
            )));
        }
        Ok(Self { dynamics: RateDynamics::ExpVasicek { theta, a, eta }, r0 })
    }

    pub fn dothan(a: f64, eta: f64, r0: f64) -> Result<Self> {
        if !(eta >= 0.0) || !a.is_finite() || !(r0 > 0.0) {
            return Err(Error::invalid(format!("Dothan needs eta >= 0 and r0 > 0, got a={a}, eta={eta}, r0={r0}")));
        }
        Ok(Self { dynamics: RateDynamics::Dothan { a, eta }, r0 })
    }

    pub fn custom(label: impl Into<String>, drift: RateFn, diffusion: RateFn, r0: f64) -> Result<Self> {
        if !r0.is_finite() {
            return Err(Error::invalid(format!("r0 must be finite, got {r0}")));
        }
        Ok(Self { dynamics: RateDynamics::Custom { label: label.into(), drift, diffusion }, r0 })
    }

    pub fn tag(&self) -> ModelTag {
        match self.dynamics {
            RateDynamics::Cir(_) => ModelTag::Cir,
            RateDynamics::ExpVasicek { .. } => ModelTag::ExpVasicek,
            RateDynamics::Dothan { .. } => ModelTag::Dothan,
            RateDynamics::Custom { .. } => ModelTag::Custom,
        }
    }

    pub fn cir_params(&self) -> Option<CirParams> {
        match self.dynamics {
            RateDynamics::Cir(p) => Some(p),
            _ => None,
        }
    }

    #[inline]
    pub fn drift(&self, t: f64, r: f64) -> f64 {
        match &self.dynamics {
            RateDynamics::Cir(p) => p.gamma_rev * (p.theta - r),
            RateDynamics::ExpVasicek { theta, a, .. } => {
                if r > 0.0 {
                    r * (theta - a * r.ln())
                } else {
                    0.0
                }
            }
            RateDynamics::Dothan { a, .. } => a * r,
            RateDynamics::Custom { drift, .. } => drift(t, r),
        }
    }

    #[inline]
    pub fn diffusion(&self, t: f64, r: f64) -> f64 {
        match &self.dynamics {
            RateDynamics::Cir(p) => p.eta * r.max(0.0).sqrt(),
            RateDynamics::ExpVasicek { eta, .. } | RateDynamics::Dothan { eta, .. } => eta * r,
            RateDynamics::Custom { diffusion, .. } => diffusion(t, r),
        }
    }
}
