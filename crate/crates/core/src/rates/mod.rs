//! Short-rate models and the integrated-rate moments.

pub mod bundle;
pub mod cir;
pub mod generic;
pub mod sqrt_mean;

pub use bundle::{cir_moment_bundle, cir_moment_bundle_with, MomentBundle};
pub use cir::{cir_bond_price, cir_mean_lambda, cir_var_lambda, cir_var_lambda_quadrature, CirParams};
pub use generic::{GenericRateModel, ModelTag, RateDynamics, RateFn};
pub use sqrt_mean::{
    cir_cross_moment, cir_cross_moment_quadrature, cir_cross_moment_with, cir_epsilon, cir_epsilon_with,
    cir_sqrt_mean_exact, cir_sqrt_mean_fit, SqrtMeanCurve, SqrtMeanFit, FIT_GRID,
};
