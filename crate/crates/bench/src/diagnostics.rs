//! d1/d2 sample export for the normality diagnostics.
//!
//! Per maturity `T` three files are written to the output directory:
//!
//! * `<name>_T<T>_d.csv`: `d1,d2` per path;
//! * `<name>_T<T>_stats.json`: [`SampleStats`] for both variables;
//! * `<name>_T<T>_qq.csv`: `variable,normal_quantile,empirical_quantile`.
//!
//! Paths are drawn without antithetic pairing so the samples are i.i.d.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cirmm::math::{qq_points, summarize, SampleStats};
use cirmm::mc::{sample_d_variables, SimConfig};
use cirmm::Contract;
use serde::Serialize;

use crate::error::BenchResult;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticStats {
    pub scenario: String,
    pub model: String,
    pub maturity: f64,
    pub rho: f64,
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub d1: SampleStats,
    pub d2: SampleStats,
}

fn maturity_tag(t: f64) -> String {
    format!("{t}").replace('.', "p")
}

pub fn emit_diagnostics(s: &Scenario, out: &Path) -> BenchResult<Vec<PathBuf>> {
    let (market, rate) = s.cell(0)?;
    let model = rate.model()?;
    let cfg = SimConfig { antithetic: false, control_variate: false, ..s.sim };
    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    for &t in &s.diagnostics.maturities {
        let c = Contract::new(s.contract.log_strike, t)?;
        let d = sample_d_variables(&market, &c, &model, &cfg)?;
        let stem = format!("{}_T{}", s.name, maturity_tag(t));

        let mut csv = String::from("d1,d2\n");
        for (a, b) in d.d1.iter().zip(&d.d2) {
            let _ = writeln!(csv, "{a:.8},{b:.8}");
        }
        let path = out.join(format!("{stem}_d.csv"));
        std::fs::write(&path, csv)?;
        files.push(path);

        let stats = DiagnosticStats {
            scenario: s.name.clone(),
            model: model.tag().name().to_string(),
            maturity: t,
            rho: market.rho,
            n_paths: cfg.n_paths,
            dt: cfg.dt,
            seed: cfg.seed,
            d1: summarize(&d.d1)?,
            d2: summarize(&d.d2)?,
        };
        let path = out.join(format!("{stem}_stats.json"));
        let json = serde_json::to_string_pretty(&stats).map_err(|e| crate::error::BenchError::Invalid(e.to_string()))?;
        std::fs::write(&path, json + "\n")?;
        files.push(path);

        let k = s.diagnostics.qq_points.min(d.d1.len() / 2).max(2);
        let mut qq = String::from("variable,normal_quantile,empirical_quantile\n");
        for (name, xs) in [("d1", &d.d1), ("d2", &d.d2)] {
            for (zq, eq) in qq_points(xs, k) {
                let _ = writeln!(qq, "{name},{zq:.6},{eq:.8}");
            }
        }
        let path = out.join(format!("{stem}_qq.csv"));
        std::fs::write(&path, qq)?;
        files.push(path);
    }
    Ok(files)
}
