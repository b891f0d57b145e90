//! Scenario files.
//!
//! TOML, schema `cirmm.scenario/v1`:
//!
//! ```toml
//! schema = "cirmm.scenario/v1"
//! name = "table1"
//! methods = ["mc", "go", "kk", "mm"]
//!
//! [market]
//! spot = 100.0
//! sigma = 0.2
//! rho = 0.0            # replaced by the sweep when axis = "rho"
//!
//! [contract]
//! strike = 100.0
//! maturity = 1.0
//!
//! [rate]
//! model = "cir"        # cir | exp-vasicek | dothan
//! gamma = 0.6          # CIR mean-reversion speed (printed as kappa in the tables)
//! theta = 0.02
//! eta = 0.1            # replaced by the sweep when axis = "eta"
//! r0 = 0.001
//! # bond_override = 0.98  (optional, MM only: observed P(0,T))
//!
//! [sweep]
//! axis = "rho"         # rho | eta
//! values = [-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9]
//!
//! [sim]                # optional; every field optional
//! profile = "desk"     # desk | full
//! paths = 100000
//! dt = 0.001
//! seed = 20240601
//! antithetic = true
//! control_variate = true
//!
//! [go]                 # optional
//! damping = -1.5
//! clock = "backward"   # backward | calendar
//!
//! [diagnostics]        # optional, used by `diagnose`
//! maturities = [1.0, 5.0]
//! qq_points = 200
//! ```
//!
//! `exp-vasicek` reads `theta`, `a`, `eta`, `r0`
//! (`dr = r(θ - a ln r) dt + η r dB`); `dothan` reads `a`, `eta`, `r0`
//! (`dr = a r dt + η r dB`). Note that the letter κ is overloaded in the
//! printed tables: there it is the CIR mean reversion, stored here as `gamma`,
//! while the log-strike is derived from `contract.strike`.

use std::fmt;
use std::path::Path;

use cirmm::go::{GoSettings, SqrtMeanClock};
use cirmm::mc::SimConfig;
use cirmm::{CirParams, Contract, GenericRateModel, MarketSpec};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, BenchResult};

pub const SCHEMA: &str = "cirmm.scenario/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc,
    Go,
    Kk,
    Mm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mc, Method::Go, Method::Kk, Method::Mm];

    pub fn label(self) -> &'static str {
        match self {
            Method::Mc => "MC",
            Method::Go => "GO",
            Method::Kk => "KK",
            Method::Mm => "MM",
        }
    }

    pub fn parse(s: &str) -> BenchResult<Vec<Method>> {
        match s.to_ascii_lowercase().as_str() {
            "mc" => Ok(vec![Method::Mc]),
            "go" => Ok(vec![Method::Go]),
            "kk" => Ok(vec![Method::Kk]),
            "mm" => Ok(vec![Method::Mm]),
            "all" => Ok(Method::ALL.to_vec()),
            other => Err(BenchError::Invalid(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Rho,
    Eta,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Rho => "rho",
            SweepAxis::Eta => "eta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Desk,
    Full,
}

impl Profile {
    pub fn config(self, seed: u64) -> SimConfig {
        match self {
            Profile::Desk => SimConfig::desk(seed),
            Profile::Full => SimConfig::full(seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateModelKind {
    Cir,
    ExpVasicek,
    Dothan,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarket {
    spot: f64,
    sigma: f64,
    #[serde(default)]
    rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContract {
    strike: f64,
    maturity: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRate {
    model: RateModelKind,
    gamma: Option<f64>,
    theta: Option<f64>,
    a: Option<f64>,
    eta: Option<f64>,
    r0: f64,
    bond_override: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: SweepAxis,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimOverrides {
    pub profile: Option<Profile>,
    pub paths: Option<usize>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub antithetic: Option<bool>,
    pub control_variate: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGo {
    damping: Option<f64>,
    clock: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagnostics {
    maturities: Vec<f64>,
    qq_points: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: String,
    name: String,
    methods: Vec<Method>,
    market: RawMarket,
    contract: RawContract,
    rate: RawRate,
    sweep: Option<RawSweep>,
    #[serde(default)]
    sim: SimOverrides,
    #[serde(default)]
    go: RawGo,
    diagnostics: Option<RawDiagnostics>,
}

/// Short-rate model of a scenario, with the swept parameter not yet applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSpec {
    Cir(CirParams),
    ExpVasicek { theta: f64, a: f64, eta: f64, r0: f64 },
    Dothan { a: f64, eta: f64, r0: f64 },
}

impl RateSpec {
    pub fn with_eta(self, eta: f64) -> BenchResult<Self> {
        Ok(match self {
            RateSpec::Cir(p) => RateSpec::Cir(p.with_eta(eta)?),
            RateSpec::ExpVasicek { theta, a, r0, .. } => RateSpec::ExpVasicek { theta, a, eta, r0 },
            RateSpec::Dothan { a, r0, .. } => RateSpec::Dothan { a, eta, r0 },
        })
    }

    pub fn cir(&self) -> Option<CirParams> {
        match self {
            RateSpec::Cir(p) => Some(*p),
            _ => None,
        }
    }

    pub fn model(&self) -> BenchResult<GenericRateModel> {
        Ok(match *self {
            RateSpec::Cir(p) => GenericRateModel::cir(p),
            RateSpec::ExpVasicek { theta, a, eta, r0 } => GenericRateModel::exp_vasicek(theta, a, eta, r0)?,
            RateSpec::Dothan { a, eta, r0 } => GenericRateModel::dothan(a, eta, r0)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    /// Ascending.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub maturities: Vec<f64>,
    pub qq_points: usize,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub market: MarketSpec,
    pub contract: Contract,
    pub rate: RateSpec,
    pub bond_override: Option<f64>,
    pub sweep: Sweep,
    /// Sorted, deduplicated.
    pub methods: Vec<Method>,
    pub sim: SimConfig,
    pub go: GoSettings,
    pub diagnostics: Diagnostics,
}

fn need(v: Option<f64>, model: &str, key: &str) -> BenchResult<f64> {
    v.ok_or_else(|| BenchError::Invalid(format!("rate model `{model}` needs `{key}`")))
}

fn reject(v: Option<f64>, model: &str, key: &str) -> BenchResult<()> {
    match v {
        Some(_) => Err(BenchError::Invalid(format!("rate model `{model}` does not take `{key}`"))),
        None => Ok(()),
    }
}

pub fn apply_sim(base: SimConfig, o: &SimOverrides) -> SimConfig {
    let mut cfg = match o.profile {
        Some(p) => p.config(base.seed),
        None => base,
    };
    if let Some(n) = o.paths {
        cfg.n_paths = n;
    }
    if let Some(dt) = o.dt {
        cfg.dt = dt;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(a) = o.antithetic {
        cfg.antithetic = a;
    }
    if let Some(c) = o.control_variate {
        cfg.control_variate = c;
    }
    cfg
}

impl Scenario {
    pub fn load(path: &Path) -> BenchResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> BenchResult<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| BenchError::Invalid(format!("scenario: {e}")))?;
        if raw.schema != SCHEMA {
            return Err(BenchError::Invalid(format!("unsupported schema `{}`, expected `{SCHEMA}`", raw.schema)));
        }
        let market = MarketSpec::from_spot(raw.market.spot, raw.market.sigma, raw.market.rho)?;
        let contract = Contract::from_strike(raw.contract.strike, raw.contract.maturity)?;

        let r = &raw.rate;
        let rate = match r.model {
            RateModelKind::Cir => {
                reject(r.a, "cir", "a")?;
                RateSpec::Cir(CirParams::new(
                    need(r.gamma, "cir", "gamma")?,
                    need(r.theta, "cir", "theta")?,
                    need(r.eta, "cir", "eta")?,
                    r.r0,
                )?)
            }
            RateModelKind::ExpVasicek => {
                reject(r.gamma, "exp-vasicek", "gamma")?;
                RateSpec::ExpVasicek {
                    theta: need(r.theta, "exp-vasicek", "theta")?,
                    a: need(r.a, "exp-vasicek", "a")?,
                    eta: need(r.eta, "exp-vasicek", "eta")?,
                    r0: r.r0,
                }
            }
            RateModelKind::Dothan => {
                reject(r.gamma, "dothan", "gamma")?;
                reject(r.theta, "dothan", "theta")?;
                RateSpec::Dothan { a: need(r.a, "dothan", "a")?, eta: need(r.eta, "dothan", "eta")?, r0: r.r0 }
            }
        };
        rate.model()?;
        if r.bond_override.is_some() && rate.cir().is_none() {
            return Err(BenchError::Invalid("bond_override only applies to the cir model".into()));
        }

        let sweep = match raw.sweep {
            Some(s) => {
                let mut values = s.values;
                if values.is_empty() {
                    return Err(BenchError::Invalid("sweep needs at least one value".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(BenchError::Invalid("sweep values must be finite".into()));
                }
                values.sort_by(f64::total_cmp);
                values.dedup();
                Sweep { axis: s.axis, values }
            }
            None => Sweep { axis: SweepAxis::Rho, values: vec![market.rho] },
        };
        for &v in &sweep.values {
            match sweep.axis {
                SweepAxis::Rho => {
                    market.with_rho(v)?;
                }
                SweepAxis::Eta => {
                    if !(v > 0.0) {
                        return Err(BenchError::Invalid(format!("eta sweep values must be > 0, got {v}")));
                    }
                    rate.with_eta(v)?;
                }
            }
        }

        let mut methods = raw.methods;
        methods.sort();
        methods.dedup();
        if methods.is_empty() {
            return Err(BenchError::Invalid("select at least one method".into()));
        }

        let sim = apply_sim(SimConfig::default(), &raw.sim);
        let mut go = GoSettings::default();
        if let Some(d) = raw.go.damping {
            go.damping = d;
        }
        if let Some(c) = raw.go.clock.as_deref() {
            go.clock = match c {
                "backward" => SqrtMeanClock::Backward,
                "calendar" => SqrtMeanClock::Calendar,
                other => return Err(BenchError::Invalid(format!("unknown go clock `{other}`"))),
            };
        }

        let diagnostics = match raw.diagnostics {
            Some(d) => {
                if d.maturities.is_empty() || d.maturities.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
                    return Err(BenchError::Invalid("diagnostics.maturities must be positive".into()));
                }
                Diagnostics { maturities: d.maturities, qq_points: d.qq_points.unwrap_or(200).max(2) }
            }
            None => Diagnostics { maturities: vec![contract.maturity], qq_points: 200 },
        };

        let s = Scenario {
            name: raw.name,
            market,
            contract,
            rate,
            bond_override: r.bond_override,
            sweep,
            methods,
            sim,
            go,
            diagnostics,
        };
        s.check()?;
        Ok(s)
    }

    /// Re-validate after command-line overrides.
    pub fn check(&self) -> BenchResult<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(BenchError::Invalid(format!("scenario name `{}` must be [A-Za-z0-9_-]+", self.name)));
        }
        if self.methods.is_empty() {
            return Err(BenchError::Invalid("select at least one method".into()));
        }
        let needs_cir = self.methods.iter().any(|m| *m != Method::Mc);
        if needs_cir && self.rate.cir().is_none() {
            return Err(BenchError::Invalid("GO, KK and MM need the cir rate model".into()));
        }
        if self.methods.contains(&Method::Mc) {
            self.sim.validate(self.contract.maturity)?;
        }
        Ok(())
    }

    /// Market and rate model of sweep cell `i`.
    pub fn cell(&self, i: usize) -> BenchResult<(MarketSpec, RateSpec)> {
        let v = self.sweep.values[i];
        Ok(match self.sweep.axis {
            SweepAxis::Rho => (self.market.with_rho(v)?, self.rate),
            SweepAxis::Eta => (self.market, self.rate.with_eta(v)?),
        })
    }

    /// Restrict the sweep to one value.
    pub fn single_cell(&self, i: usize) -> BenchResult<Self> {
        let v = *self.sweep.values.get(i).ok_or_else(|| {
            BenchError::Invalid(format!("cell {i} out of range, sweep has {} values", self.sweep.values.len()))
        })?;
        let mut s = self.clone();
        s.sweep.values = vec![v];
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema = "cirmm.scenario/v1"
name = "mini"
methods = ["mm", "kk"]
[market]
spot = 100.0
sigma = 0.2
[contract]
strike = 100.0
maturity = 1.0
[rate]
model = "cir"
gamma = 0.6
theta = 0.02
eta = 0.1
r0 = 0.001
[sweep]
axis = "rho"
values = [0.3, -0.3, 0.0]
"#;

    #[test]
    fn parses_and_sorts() {
        let s = Scenario::parse(MINIMAL).unwrap();
        assert_eq!(s.sweep.values, vec![-0.3, 0.0, 0.3]);
        assert_eq!(s.methods, vec![Method::Kk, Method::Mm]);
        assert_eq!(s.sim, SimConfig::default());
        assert!((s.contract.log_strike - 100f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let wrong_schema = MINIMAL.replace("cirmm.scenario/v1", "cirmm.scenario/v0");
        assert!(matches!(Scenario::parse(&wrong_schema), Err(BenchError::Invalid(_))));
        let bad_rho = MINIMAL.replace("values = [0.3, -0.3, 0.0]", "values = [1.0]");
        assert_eq!(Scenario::parse(&bad_rho).unwrap_err().exit_code(), 1);
        let no_methods = MINIMAL.replace(r#"methods = ["mm", "kk"]"#, "methods = []");
        assert!(matches!(Scenario::parse(&no_methods), Err(BenchError::Invalid(_))));
        let typo = MINIMAL.replace("theta = 0.02", "theta = 0.02\nthetta = 1.0");
        assert!(matches!(Scenario::parse(&typo), Err(BenchError::Invalid(_))));
        let neg_eta = MINIMAL.replace("axis = \"rho\"", "axis = \"eta\"").replace("[0.3, -0.3, 0.0]", "[0.1, -0.1]");
        assert!(matches!(Scenario::parse(&neg_eta), Err(BenchError::Invalid(_))));
    }

    #[test]
    fn sim_overrides_layer_on_profile() {
        let text = format!("{MINIMAL}\n[sim]\nprofile = \"full\"\nseed = 7\npaths = 1000\n");
        let s = Scenario::parse(&text).unwrap();
        assert_eq!(s.sim.n_paths, 1000);
        assert_eq!(s.sim.seed, 7);
        assert!(!s.sim.antithetic);
    }

    #[test]
    fn approximations_need_cir() {
        let text = MINIMAL
            .replace("model = \"cir\"\ngamma = 0.6\ntheta = 0.02", "model = \"dothan\"\na = 0.01");
        assert!(matches!(Scenario::parse(&text), Err(BenchError::Invalid(_))));
        let mc_only = text.replace(r#"methods = ["mm", "kk"]"#, r#"methods = ["mc"]"#);
        assert!(Scenario::parse(&mc_only).is_ok());
    }
}
