//! Numerical building blocks shared by the pricers.

pub mod quad;
pub mod special;
pub mod stats;

pub use quad::{integrate, try_integrate, Integrator, QuadResult, QuadValue, INVERSION_TOL, MOMENT_TOL};
pub use special::{lemma1_expectation, norm_cdf, norm_pdf, norm_quantile, GaussianLaw};
pub use stats::{qq_points, summarize, SampleStats};
