//! Sweep execution.

use std::time::Instant;

use cirmm::go::go_price_with;
use cirmm::kk::kk_price;
use cirmm::mc::{estimate_conditional, simulate_paths, PathSet, PriceEstimate};
use cirmm::mm::mm_price;
use cirmm::rates::{cir_moment_bundle_with, cir_sqrt_mean_fit, SqrtMeanCurve};
use cirmm::{CirParams, MomentBundle, SqrtMeanFit};
use serde::Serialize;

use crate::error::BenchResult;
use crate::scenario::{Method, RateSpec, Scenario, SweepAxis};

/// Repetitions behind each closed-form timing.
pub const TIMING_REPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Cell {
    Value(f64),
    Failed(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Failed(_) => None,
        }
    }

    fn from_result(r: cirmm::Result<f64>) -> Self {
        match r {
            Ok(v) if v.is_finite() => Cell::Value(v),
            Ok(v) => Cell::Failed(format!("non-finite price {v}")),
            Err(e) => Cell::Failed(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodRow {
    pub method: Method,
    pub prices: Vec<Cell>,
    /// Mean wall-clock seconds for one standalone price (rate-side
    /// precomputation or path simulation included). `None` when timing is off.
    pub seconds_per_price: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultTable {
    pub name: String,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// In `Method` order.
    pub rows: Vec<MethodRow>,
    pub mc_std_error: Option<Vec<Option<f64>>>,
    pub mc_ci: Option<Vec<Option<f64>>>,
    /// `MC - method`, only when MC ran.
    pub errors: Vec<(Method, Vec<Option<f64>>)>,
    /// `|MC - method| / MC`.
    pub rel_errors: Vec<(Method, Vec<Option<f64>>)>,
    /// Number of CIR moment bundle / square-root fit computations performed
    /// for pricing (timing repetitions excluded).
    pub moment_computations: usize,
    /// Number of path sets simulated for the MC row.
    pub path_simulations: usize,
}

impl ResultTable {
    pub fn row(&self, m: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.method == m)
    }

    pub fn prices(&self, m: Method) -> Option<Vec<Option<f64>>> {
        self.row(m).map(|r| r.prices.iter().map(Cell::value).collect())
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            for (v, c) in self.values.iter().zip(&r.prices) {
                if let Cell::Failed(msg) = c {
                    out.push(format!("{} {}={}: {}", r.method, self.axis.name(), v, msg));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Record per-price timings.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

struct Prepared {
    params: CirParams,
    fit: Result<SqrtMeanFit, String>,
    bundle: Result<MomentBundle, String>,
}

fn prepare(p: &CirParams, t: f64, bond: Option<f64>) -> Prepared {
    let fit = cir_sqrt_mean_fit(p);
    let bundle = fit
        .clone()
        .and_then(|f| cir_moment_bundle_with(p, t, &SqrtMeanCurve::Fitted(f)))
        .and_then(|b| match bond {
            Some(v) => b.with_market_bond(v),
            None => Ok(b),
        });
    Prepared { params: *p, fit: fit.map_err(|e| e.to_string()), bundle: bundle.map_err(|e| e.to_string()) }
}

fn mean_seconds<F: FnMut()>(mut f: F, reps: usize) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        f();
    }
    start.elapsed().as_secs_f64() / reps as f64
}

pub fn run_scenario(s: &Scenario) -> BenchResult<ResultTable> {
    run_scenario_with(s, RunOptions::default())
}

pub fn run_scenario_with(s: &Scenario, opts: RunOptions) -> BenchResult<ResultTable> {
    s.check()?;
    let n = s.sweep.values.len();
    let t = s.contract.maturity;
    let c = &s.contract;
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        cells.push(s.cell(i)?);
    }

    let mut prepared: Vec<Prepared> = Vec::new();
    let mut moment_computations = 0;
    let mut prep_index = Vec::with_capacity(n);
    if s.methods.iter().any(|m| matches!(m, Method::Go | Method::Mm)) {
        for (_, rate) in &cells {
            let p = rate.cir().expect("checked by Scenario::check");
            let idx = match prepared.iter().position(|q| q.params == p) {
                Some(j) => j,
                None => {
                    moment_computations += 1;
                    prepared.push(prepare(&p, t, s.bond_override));
                    prepared.len() - 1
                }
            };
            prep_index.push(idx);
        }
    }

    let mut rows = Vec::new();
    let mut mc_estimates: Option<Vec<Result<PriceEstimate, String>>> = None;
    let mut path_simulations = 0;

    for &method in &s.methods {
        let mut prices = Vec::with_capacity(n);
        let mut secs = 0.0;
        match method {
            Method::Mm => {
                for (i, (m, rate)) in cells.iter().enumerate() {
                    let prep = &prepared[prep_index[i]];
                    prices.push(match &prep.bundle {
                        Ok(b) => Cell::from_result(mm_price(m, c, b)),
                        Err(e) => Cell::Failed(e.clone()),
                    });
                    if opts.timing {
                        let p = rate.cir().unwrap();
                        let bond = s.bond_override;
                        secs += mean_seconds(
                            || {
                                let _ = std::hint::black_box(prepare(&p, t, bond).bundle.map(|b| mm_price(m, c, &b)));
                            },
                            TIMING_REPS,
                        );
                    }
                }
            }
            Method::Go => {
                for (i, (m, rate)) in cells.iter().enumerate() {
                    let prep = &prepared[prep_index[i]];
                    prices.push(match &prep.fit {
                        Ok(f) => Cell::from_result(go_price_with(m, c, &prep.params, f, &s.go)),
                        Err(e) => Cell::Failed(e.clone()),
                    });
                    if opts.timing {
                        let p = rate.cir().unwrap();
                        secs += mean_seconds(
                            || {
                                let _ = std::hint::black_box(
                                    cir_sqrt_mean_fit(&p).and_then(|f| go_price_with(m, c, &p, &f, &s.go)),
                                );
                            },
                            TIMING_REPS,
                        );
                    }
                }
            }
            Method::Kk => {
                for (m, rate) in &cells {
                    let p = rate.cir().unwrap();
                    prices.push(Cell::from_result(kk_price(m, c, &p)));
                    if opts.timing {
                        secs += mean_seconds(
                            || {
                                let _ = std::hint::black_box(kk_price(m, c, &p));
                            },
                            TIMING_REPS,
                        );
                    }
                }
            }
            Method::Mc => {
                let mut ests = Vec::with_capacity(n);
                let mut current: Option<(RateSpec, Result<PathSet, String>, f64)> = None;
                for (m, rate) in &cells {
                    if current.as_ref().map(|(r, _, _)| r != rate).unwrap_or(true) {
                        let start = Instant::now();
                        let set = rate
                            .model()
                            .and_then(|model| Ok(simulate_paths(&model, t, &s.sim)?))
                            .map_err(|e| e.to_string());
                        path_simulations += 1;
                        current = Some((*rate, set, start.elapsed().as_secs_f64()));
                    }
                    let (_, set, sim_secs) = current.as_ref().unwrap();
                    let start = Instant::now();
                    let est = match set {
                        Ok(paths) => estimate_conditional(paths, m, c, s.sim.control_variate).map_err(|e| e.to_string()),
                        Err(e) => Err(e.clone()),
                    };
                    secs += sim_secs + start.elapsed().as_secs_f64();
                    prices.push(match &est {
                        Ok(e) => Cell::Value(e.value),
                        Err(msg) => Cell::Failed(msg.clone()),
                    });
                    ests.push(est);
                }
                mc_estimates = Some(ests);
            }
        }
        rows.push(MethodRow { method, prices, seconds_per_price: opts.timing.then(|| secs / n as f64) });
    }

    let (mc_std_error, mc_ci) = match &mc_estimates {
        Some(ests) => (
            Some(ests.iter().map(|e| e.as_ref().ok().map(|e| e.std_error)).collect()),
            Some(ests.iter().map(|e| e.as_ref().ok().map(|e| e.ci_halfwidth)).collect()),
        ),
        None => (None, None),
    };

    let mut errors = Vec::new();
    let mut rel_errors = Vec::new();
    if let Some(mc) = rows.iter().find(|r| r.method == Method::Mc).map(|r| r.prices.clone()) {
        for r in rows.iter().filter(|r| r.method != Method::Mc) {
            let err: Vec<Option<f64>> = mc
                .iter()
                .zip(&r.prices)
                .map(|(a, b)| Some(a.value()? - b.value()?))
                .collect();
            let rel = err.iter().zip(&mc).map(|(e, a)| Some(e.as_ref()?.abs() / a.value()?.abs())).collect();
            errors.push((r.method, err));
            rel_errors.push((r.method, rel));
        }
    }

    Ok(ResultTable {
        name: s.name.clone(),
        axis: s.sweep.axis,
        values: s.sweep.values.clone(),
        rows,
        mc_std_error,
        mc_ci,
        errors,
        rel_errors,
        moment_computations,
        path_simulations,
    })
}

/// Mean of the available `|rel error|` cells of one method.
pub fn mean_abs_rel_error(t: &ResultTable, m: Method) -> Option<f64> {
    let (_, v) = t.rel_errors.iter().find(|(k, _)| *k == m)?;
    let vals: Vec<f64> = v.iter().flatten().copied().collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}
