//! Closed-form rate moments against their Monte Carlo oracles.

use std::fmt::Write as _;

use cirmm::mc::{moment_oracles, Estimate, SimConfig};
use cirmm::rates::{
    cir_bond_price, cir_cross_moment_with, cir_epsilon_with, cir_mean_lambda, cir_sqrt_mean_exact, cir_sqrt_mean_fit,
    cir_var_lambda, SqrtMeanCurve,
};
use cirmm::CirParams;
use serde::Serialize;

use crate::error::{BenchError, BenchResult};

/// Agreement threshold in standard errors.
pub const Z_MAX: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub closed_form: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
    pub pass: bool,
}

fn check(name: impl Into<String>, closed_form: f64, e: Estimate) -> Check {
    let z = e.z_score(closed_form);
    Check { name: name.into(), closed_form, estimate: e.value, std_error: e.std_error, z, pass: z <= Z_MAX }
}

/// Every moment entering the moment-matching price, plus `E[√r_t]` on the
/// fit grid. Cross moment and `ε` are checked with both the fitted and the
/// exact square-root mean curve.
pub fn validate_moments(p: &CirParams, maturity: f64, cfg: &SimConfig) -> BenchResult<Vec<Check>> {
    let o = moment_oracles(p, maturity, cfg)?;
    let fitted = SqrtMeanCurve::Fitted(cir_sqrt_mean_fit(p)?);
    let exact = SqrtMeanCurve::Exact;
    let mut out = vec![
        check("lambda", cir_mean_lambda(p, maturity)?, o.lambda),
        check("var_lambda", cir_var_lambda(p, maturity)?, o.var_lambda),
        check("bond", cir_bond_price(p, maturity)?, o.bond),
        check("cross_bl[fitted]", cir_cross_moment_with(p, &fitted, maturity)?, o.cross_bl),
        check("cross_bl[exact]", cir_cross_moment_with(p, &exact, maturity)?, o.cross_bl),
        check("epsilon[fitted]", cir_epsilon_with(p, &fitted, maturity)?, o.epsilon),
        check("epsilon[exact]", cir_epsilon_with(p, &exact, maturity)?, o.epsilon),
    ];
    for (t, e) in &o.sqrt_mean {
        out.push(check(format!("sqrt_mean[t={t}]"), cir_sqrt_mean_exact(p, *t)?, *e));
    }
    Ok(out)
}

pub fn render_checks(checks: &[Check]) -> String {
    let mut s = String::from("check,closed_form,estimate,std_error,z,status\n");
    for c in checks {
        let _ = writeln!(
            s,
            "{},{:.10e},{:.10e},{:.3e},{:.2},{}",
            c.name,
            c.closed_form,
            c.estimate,
            c.std_error,
            c.z,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

pub fn require_all(checks: &[Check]) -> BenchResult<()> {
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        Err(BenchError::CellFailures(failed))
    } else {
        Ok(())
    }
}
