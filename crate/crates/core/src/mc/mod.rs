//! Monte Carlo benchmark and moment oracles.

pub mod config;
pub mod estimators;
pub mod oracles;
pub mod paths;

pub use config::{SimConfig, DEFAULT_DT, DEFAULT_SEED, DESK_PATHS, FULL_PATHS, MIN_CI_PATHS};
pub use estimators::{
    d_samples_from, estimate_conditional, estimate_direct, mc_price_conditional, mc_price_direct, sample_d_variables,
    DSamples, PriceEstimate, CI_Z,
};
pub use oracles::{moment_oracles, Estimate, MomentOracles};
pub use paths::{simulate_paths, simulate_paths_with, Kernel, Observables, PathOutput, PathSet};
