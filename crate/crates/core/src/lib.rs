//! European call pricing under a Black–Scholes asset whose short rate follows
//! a correlated CIR process.
//!
//! Four pricers share the same inputs ([`MarketSpec`], [`Contract`],
//! [`CirParams`]):
//!
//! * [`mm::mm_price`]: Gaussian moment matching of the conditional
//!   Black–Scholes variables, driven by a precomputed [`MomentBundle`];
//! * [`go::go_price`]: affine approximation with the square-root mean
//!   replaced by a deterministic curve, priced by damped Fourier inversion;
//! * [`kk::kk_price`]: first-order expansion in the rate volatility;
//! * [`mc`]: full-truncation Euler Monte Carlo of the conditional
//!   representation, used as benchmark and as oracle for the moments.

pub mod error;
pub mod go;
pub mod kk;
pub mod market;
pub mod math;
pub mod mc;
pub mod mm;
pub mod rates;

pub use error::{Error, Result};
pub use market::{bs_call_deterministic, Contract, MarketSpec};
pub use rates::{CirParams, GenericRateModel, MomentBundle, SqrtMeanFit};
