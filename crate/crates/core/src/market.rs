//! Asset and contract descriptions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::norm_cdf;

/// Largest |ρ| accepted. The conditional coefficients divide by √(1-ρ²).
pub const MAX_ABS_RHO: f64 = 0.999;

/// Log-spot, asset volatility and asset/rate correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketSpec {
    pub x: f64,
    pub sigma: f64,
    pub rho: f64,
}

impl MarketSpec {
    pub fn new(x: f64, sigma: f64, rho: f64) -> Result<Self> {
        let m = Self { x, sigma, rho };
        m.validate()?;
        Ok(m)
    }

    pub fn from_spot(spot: f64, sigma: f64, rho: f64) -> Result<Self> {
        if !(spot > 0.0) || !spot.is_finite() {
            return Err(Error::invalid(format!("spot must be positive, got {spot}")));
        }
        Self::new(spot.ln(), sigma, rho)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x.is_finite() {
            return Err(Error::invalid(format!("log-spot must be finite, got {}", self.x)));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.rho.abs() <= MAX_ABS_RHO) {
            return Err(Error::invalid(format!("|rho| must be <= {MAX_ABS_RHO}, got {}", self.rho)));
        }
        Ok(())
    }

    pub fn spot(&self) -> f64 {
        self.x.exp()
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.x, self.sigma, rho)
    }
}

/// European call: log-strike κ and maturity T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contract {
    pub log_strike: f64,
    pub maturity: f64,
}

impl Contract {
    pub fn new(log_strike: f64, maturity: f64) -> Result<Self> {
        let c = Self { log_strike, maturity };
        c.validate()?;
        Ok(c)
    }

    pub fn from_strike(strike: f64, maturity: f64) -> Result<Self> {
        if !(strike > 0.0) || !strike.is_finite() {
            return Err(Error::invalid(format!("strike must be positive, got {strike}")));
        }
        Self::new(strike.ln(), maturity)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.log_strike.is_finite() {
            return Err(Error::invalid(format!("log-strike must be finite, got {}", self.log_strike)));
        }
        if !(self.maturity > 0.0) || !self.maturity.is_finite() {
            return Err(Error::invalid(format!("maturity must be > 0, got {}", self.maturity)));
        }
        Ok(())
    }

    pub fn strike(&self) -> f64 {
        self.log_strike.exp()
    }
}

/// Black–Scholes call with a deterministic short rate whose integral over
/// `[0, T]` is `int_rate`.
pub fn bs_call_deterministic(m: &MarketSpec, c: &Contract, int_rate: f64) -> f64 {
    let t = c.maturity;
    let sd = m.sigma * t.sqrt();
    let d1 = (m.x - c.log_strike + int_rate + 0.5 * m.sigma * m.sigma * t) / sd;
    let d2 = d1 - sd;
    m.x.exp() * norm_cdf(d1) - (c.log_strike - int_rate).exp() * norm_cdf(d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(MarketSpec::new(0.0, 0.0, 0.0).unwrap_err().is_invalid_input());
        assert!(MarketSpec::new(0.0, 0.2, 1.0).is_err());
        assert!(MarketSpec::new(0.0, 0.2, f64::NAN).is_err());
        assert!(MarketSpec::new(0.0, 0.2, -0.999).is_ok());
        assert!(Contract::new(0.0, 0.0).is_err());
        assert!(Contract::from_strike(-1.0, 1.0).is_err());
    }

    #[test]
    fn black_scholes_reference() {
        // S=K=100, r=5%, sigma=20%, T=1: 10.450583572185565
        let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
        let c = Contract::from_strike(100.0, 1.0).unwrap();
        assert!((bs_call_deterministic(&m, &c, 0.05) - 10.450_583_572_185_565).abs() < 1e-10);
    }
}
