//! `E[√r_t]` for the CIR rate: exact value, the three-point exponential fit
//! `a + b e^{-ct}`, and the moments built on top of it (`E[B¹_T Λ_T]`, `ε(T)`).

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::cir::{nested_triangle, one_minus_exp_over, CirParams};
use crate::error::{Error, Result};
use crate::math::{try_integrate, MOMENT_TOL};

/// Grid used by the least-squares fallback of the fit.
pub const FIT_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 5.0];

/// Poisson means above this switch the series to a moment expansion.
const LARGE_NONCENTRALITY: f64 = 1e6;

/// `Γ(a + 1/2) / Γ(a)` for `a > 0`.
fn gamma_half_ratio(a: f64) -> f64 {
    if a < 200.0 {
        (ln_gamma(a + 0.5) - ln_gamma(a)).exp()
    } else {
        let r = 1.0 / a;
        a.sqrt() * (1.0 + r * (-1.0 / 8.0 + r * (1.0 / 128.0 + r * (5.0 / 1024.0 - r * 21.0 / 32768.0))))
    }
}

/// `E[√Y]` for `Y ~ χ'²(df, nc)` by a fourth-order expansion of `√` around the mean.
fn sqrt_mean_expansion(df: f64, nc: f64) -> f64 {
    let m = df + nc;
    let k2 = 2.0 * (df + 2.0 * nc);
    let k3 = 8.0 * (df + 3.0 * nc);
    let k4 = 48.0 * (df + 4.0 * nc) + 3.0 * k2 * k2;
    let s = m.sqrt();
    s - k2 / (8.0 * m * s) + k3 / (16.0 * m * m * s) - 5.0 * k4 / (128.0 * m * m * m * s)
}

/// Exact `E[√r_t]` from the noncentral chi-square law of `r_t`:
/// `r_t = k Y`, `Y ~ χ'²(4γθ/η², r0 e^{-γt}/k)`, `k = η²(1 - e^{-γt})/(4γ)`,
/// and `E[√Y] = √2 Σ_j Pois(j; nc/2) Γ((df+1)/2 + j) / Γ(df/2 + j)`.
pub fn cir_sqrt_mean_exact(p: &CirParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(p.r0.sqrt());
    }
    let g = p.gamma_rev;
    let k = p.eta * p.eta * one_minus_exp_over(g, t) / 4.0;
    let df = 4.0 * g * p.theta / (p.eta * p.eta);
    let nc = p.r0 * (-g * t).exp() / k;
    let mu = 0.5 * nc;

    if mu > LARGE_NONCENTRALITY {
        return Ok(k.sqrt() * sqrt_mean_expansion(df, nc));
    }

    // Poisson weights relative to the mode, summed outwards from it.
    let mode = mu.floor();
    let half_width = (40.0 * (mode + 1.0).sqrt() + 50.0).ceil();
    let lo = (mode - half_width).max(0.0) as u64;
    let hi = (mode + half_width) as u64;
    let m = mode as u64;
    let a0 = 0.5 * df + mode;
    let r_mode = gamma_half_ratio(a0);

    let (mut sw, mut swr) = (1.0, r_mode);
    let (mut w, mut r) = (1.0, r_mode);
    for j in m..hi {
        let jf = j as f64;
        w *= mu / (jf + 1.0);
        let a = 0.5 * df + jf;
        r *= (a + 0.5) / a;
        sw += w;
        swr += w * r;
        if w < 1e-18 * sw {
            break;
        }
    }
    let (mut w, mut r) = (1.0, r_mode);
    let mut j = m;
    while j > lo {
        let jf = j as f64;
        w *= jf / mu;
        let a = 0.5 * df + jf - 1.0;
        r *= a / (a + 0.5);
        sw += w;
        swr += w * r;
        j -= 1;
        if w < 1e-18 * sw {
            break;
        }
    }
    let value = (2.0 * k).sqrt() * swr / sw;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical(format!("E[sqrt r_t] not finite at t={t} for {p:?}")))
    }
}

/// `E[√r_t] ≈ a + b e^{-ct}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtMeanFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SqrtMeanFit {
    pub fn value(&self, t: f64) -> f64 {
        self.a + self.b * (-self.c * t).exp()
    }
}

/// Fit `a + b e^{-ct}` to `E[√r_t]`:
/// `a` is the long-time level `√max(θ - η²/(8γ), 0)`, `b = √r0 - a` anchors
/// `t = 0`, and `c` matches the exact value at `t = 1`. When `b = 0` the fit is
/// flat and `c = γ`. If the `t = 1` match has no positive solution, `c` is
/// chosen by least squares against exact values on [`FIT_GRID`].
pub fn cir_sqrt_mean_fit(p: &CirParams) -> Result<SqrtMeanFit> {
    p.validate()?;
    let a = (p.theta - p.eta * p.eta / (8.0 * p.gamma_rev)).max(0.0).sqrt();
    let b = p.r0.sqrt() - a;
    if b.abs() <= 1e-14 * a.max(1e-300) || b == 0.0 {
        return Ok(SqrtMeanFit { a, b: 0.0, c: p.gamma_rev });
    }
    let e1 = cir_sqrt_mean_exact(p, 1.0)?;
    let ratio = (e1 - a) / b;
    if ratio > 0.0 && ratio < 1.0 {
        return Ok(SqrtMeanFit { a, b, c: -ratio.ln() });
    }
    least_squares_rate(p, a, b)
}

fn least_squares_rate(p: &CirParams, a: f64, b: f64) -> Result<SqrtMeanFit> {
    let targets = FIT_GRID
        .iter()
        .map(|&t| cir_sqrt_mean_exact(p, t))
        .collect::<Result<Vec<_>>>()?;
    let sse = |u: f64| {
        let c = u.exp();
        FIT_GRID
            .iter()
            .zip(&targets)
            .map(|(&t, &e)| (a + b * (-c * t).exp() - e).powi(2))
            .sum::<f64>()
    };
    let (lo, hi) = (1e-4f64.ln(), 1e3f64.ln());
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x0, mut x1) = (lo, hi);
    let mut y0 = x1 - inv_phi * (x1 - x0);
    let mut y1 = x0 + inv_phi * (x1 - x0);
    let (mut f0, mut f1) = (sse(y0), sse(y1));
    for _ in 0..200 {
        if f0 < f1 {
            x1 = y1;
            y1 = y0;
            f1 = f0;
            y0 = x1 - inv_phi * (x1 - x0);
            f0 = sse(y0);
        } else {
            x0 = y0;
            y0 = y1;
            f0 = f1;
            y1 = x0 + inv_phi * (x1 - x0);
            f1 = sse(y1);
        }
    }
    let u = 0.5 * (x0 + x1);
    if (u - lo).abs() < 1e-6 || (hi - u).abs() < 1e-6 || !u.is_finite() {
        return Err(Error::FitFailure(format!(
            "gamma_rev={}, theta={}, eta={}, r0={}",
            p.gamma_rev, p.theta, p.eta, p.r0
        )));
    }
    Ok(SqrtMeanFit { a, b, c: u.exp() })
}

/// Which `E[√r_t]` curve feeds the cross moment and `ε(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SqrtMeanCurve {
    Fitted(SqrtMeanFit),
    /// Exact noncentral chi-square value at every node.
    Exact,
}

impl SqrtMeanCurve {
    pub fn eval(&self, p: &CirParams, t: f64) -> Result<f64> {
        match self {
            SqrtMeanCurve::Fitted(f) => Ok(f.value(t)),
            SqrtMeanCurve::Exact => cir_sqrt_mean_exact(p, t),
        }
    }
}

/// `∫_0^T e^{-cv} (1 - e^{-γ(T-v)})/γ dv`
/// `= [(1 - e^{-cT})/c - e^{-cT}(1 - e^{-(γ-c)T})/(γ-c)] / γ`, which has no
/// removable singularity at `c = γ`.
fn exp_kernel_integral(g: f64, c: f64, t: f64) -> f64 {
    (one_minus_exp_over(c, t) - (-c * t).exp() * one_minus_exp_over(g - c, t)) / g
}

/// `E[B¹_T Λ_T] = η ∫_0^T ∫_0^s e^{-γ(s-v)} E[√r_v] dv ds` with the fitted
/// square-root mean, in closed form.
pub fn cir_cross_moment(p: &CirParams, fit: &SqrtMeanFit, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be >= 0, got {t}")));
    }
    let g = p.gamma_rev;
    let level = (t - one_minus_exp_over(g, t)) / g;
    Ok(p.eta * (fit.a * level + fit.b * exp_kernel_integral(g, fit.c, t)))
}

/// The cross moment by literal double quadrature, for any curve.
pub fn cir_cross_moment_quadrature(p: &CirParams, curve: &SqrtMeanCurve, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be >= 0, got {t}")));
    }
    if let SqrtMeanCurve::Fitted(fit) = curve {
        let g = p.gamma_rev;
        return Ok(p.eta * nested_triangle(|s, v| (-g * (s - v)).exp() * fit.value(v), t, MOMENT_TOL * 1e-3)?);
    }
    cir_cross_moment_with(p, curve, t)
}

/// The cross moment for any curve via the single integral
/// `η ∫_0^T m(v) (1 - e^{-γ(T-v)})/γ dv`.
pub fn cir_cross_moment_with(p: &CirParams, curve: &SqrtMeanCurve, t: f64) -> Result<f64> {
    if let SqrtMeanCurve::Fitted(fit) = curve {
        return cir_cross_moment(p, fit, t);
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be >= 0, got {t}")));
    }
    let g = p.gamma_rev;
    let v = try_integrate(
        |v| Ok(curve.eval(p, v)? * one_minus_exp_over(g, t - v)),
        0.0,
        t,
        MOMENT_TOL * 1e-2,
    )?;
    Ok(p.eta * v)
}

/// `ε(T) ≈ -η ∫_0^T B(T - s) E[√r_s] ds` with the fitted square-root mean.
pub fn cir_epsilon(p: &CirParams, fit: &SqrtMeanFit, t: f64) -> Result<f64> {
    cir_epsilon_with(p, &SqrtMeanCurve::Fitted(*fit), t)
}

pub fn cir_epsilon_with(p: &CirParams, curve: &SqrtMeanCurve, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("maturity must be >= 0, got {t}")));
    }
    let v = try_integrate(|s| Ok(p.bond_b(t - s) * curve.eval(p, s)?), 0.0, t, MOMENT_TOL)?;
    Ok(-p.eta * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> CirParams {
        CirParams::new(0.6, 0.02, 0.1, 0.001).unwrap()
    }

    #[test]
    fn gamma_ratio_branches_agree() {
        for &a in &[150.0, 199.99, 200.0, 250.0] {
            let direct = (ln_gamma(a + 0.5) - ln_gamma(a)).exp();
            assert!((gamma_half_ratio(a) / direct - 1.0).abs() < 1e-12, "a={a}");
        }
        assert!((gamma_half_ratio(0.5) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exact_sqrt_mean_reference_values() {
        // mpmath quadrature of sqrt(y) against the noncentral chi-square density
        let p = table();
        assert_eq!(cir_sqrt_mean_exact(&p, 0.0).unwrap(), p.r0.sqrt());
        let v = cir_sqrt_mean_exact(&p, 1.0).unwrap();
        assert!((v - REF_T1).abs() < 1e-12, "{v}");
        let v = cir_sqrt_mean_exact(&p, 5.0).unwrap();
        assert!((v - REF_T5).abs() < 1e-12, "{v}");
    }

    const REF_T1: f64 = 0.092_919_072_210_107_02;
    const REF_T5: f64 = 0.131_078_127_140_011_42;

    #[test]
    fn exact_sqrt_mean_large_noncentrality_is_continuous() {
        // Poisson mean just below and just above the switch
        let base = table();
        let eta_at = |mu: f64| {
            let g = base.gamma_rev;
            let t: f64 = 1.0;
            // mu = r0 e^{-gt} / (2k),  k = eta^2 (1 - e^{-gt}) / (4g)
            (base.r0 * (-g * t).exp() * 4.0 * g / (2.0 * mu * (1.0 - (-g * t).exp()))).sqrt()
        };
        let lo = CirParams { eta: eta_at(0.999e6), ..base };
        let hi = CirParams { eta: eta_at(1.001e6), ..base };
        let a = cir_sqrt_mean_exact(&lo, 1.0).unwrap();
        let b = cir_sqrt_mean_exact(&hi, 1.0).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        // deterministic limit: sqrt of the mean rate
        let tiny = CirParams { eta: 1e-7, ..base };
        let v = cir_sqrt_mean_exact(&tiny, 1.0).unwrap();
        assert!((v - tiny.mean_rate(1.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn fit_anchors_and_degenerate_case() {
        let p = table();
        let f = cir_sqrt_mean_fit(&p).unwrap();
        assert!(f.a >= 0.0 && f.c > 0.0);
        assert!((f.value(0.0) - p.r0.sqrt()).abs() < 1e-15);
        assert!((f.value(1.0) - cir_sqrt_mean_exact(&p, 1.0).unwrap()).abs() < 1e-14);
        let a = (p.theta - p.eta * p.eta / (8.0 * p.gamma_rev)).sqrt();
        let flat = CirParams { r0: a * a, ..p };
        let f = cir_sqrt_mean_fit(&flat).unwrap();
        assert_eq!(f.b, 0.0);
        assert_eq!(f.c, p.gamma_rev);
    }

    #[test]
    fn cross_moment_closed_form_vs_quadrature() {
        for p in [table(), CirParams::new(0.58, 0.0345, 0.04, 0.001).unwrap(), CirParams::new(1.1, 0.05, 0.2, 0.03).unwrap()] {
            let fit = cir_sqrt_mean_fit(&p).unwrap();
            for &t in &[0.0, 0.5, 1.0, 5.0] {
                let a = cir_cross_moment(&p, &fit, t).unwrap();
                let q = cir_cross_moment_quadrature(&p, &SqrtMeanCurve::Fitted(fit), t).unwrap();
                assert!((a - q).abs() < 1e-10, "{p:?} t={t}: {a} vs {q}");
            }
        }
    }

    #[test]
    fn cross_kernel_near_reversion_speed() {
        let g = 0.6;
        let t = 2.0;
        for c in [g, g * (1.0 + 1e-7), g * (1.0 - 1e-5), g * (1.0 + 1e-4), 2.0 * g, 0.05] {
            let q = crate::math::integrate(|v| (-c * v).exp() * one_minus_exp_over(g, t - v), 0.0, t, 1e-15).unwrap();
            assert!((exp_kernel_integral(g, c, t) - q).abs() < 1e-14, "c={c}");
        }
        let closed = (1.0 - (-g * t).exp() * (1.0 + g * t)) / (g * g);
        assert!((exp_kernel_integral(g, g, t) - closed).abs() < 1e-15);
    }

    #[test]
    fn degenerate_moments_vanish() {
        let p = table();
        let fit = cir_sqrt_mean_fit(&p).unwrap();
        assert_eq!(cir_epsilon(&p, &fit, 0.0).unwrap(), 0.0);
        assert_eq!(cir_cross_moment(&p, &fit, 0.0).unwrap(), 0.0);
        let tiny = CirParams { eta: 1e-9, ..p };
        let fit = cir_sqrt_mean_fit(&tiny).unwrap();
        assert!(cir_epsilon(&tiny, &fit, 5.0).unwrap().abs() < 1e-8);
        assert!(cir_cross_moment(&tiny, &fit, 5.0).unwrap().abs() < 1e-8);
        let zero_rate = CirParams { r0: 0.0, theta: 1e-14, ..p };
        let fit = cir_sqrt_mean_fit(&zero_rate).unwrap();
        assert!(cir_cross_moment(&zero_rate, &fit, 1.0).unwrap().abs() < 1e-7);
    }

    #[test]
    fn exact_curve_variants_agree() {
        let p = table();
        let a = cir_cross_moment_with(&p, &SqrtMeanCurve::Exact, 1.0).unwrap();
        let q = cir_cross_moment_quadrature(&p, &SqrtMeanCurve::Exact, 1.0).unwrap();
        assert_eq!(a, q);
        assert!(cir_epsilon_with(&p, &SqrtMeanCurve::Exact, 1.0).unwrap() < 0.0);
    }
}
