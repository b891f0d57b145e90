use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cirmm_bench::emit::{emit_table, Format};
use cirmm_bench::error::{BenchError, BenchResult};
use cirmm_bench::run::{run_scenario, ResultTable};
use cirmm_bench::scenario::{apply_sim, Method, Profile, Scenario, SimOverrides};
use cirmm_bench::validate::{render_checks, require_all, validate_moments};
use cirmm_bench::emit_diagnostics;

#[derive(Parser)]
#[command(name = "cirmm", version, about = "Option pricing benchmarks under a correlated CIR short rate")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Price one cell of a scenario's sweep.
    Price {
        #[command(flatten)]
        common: Common,
        /// Sweep index of the cell.
        #[arg(long, default_value_t = 0)]
        cell: usize,
    },
    /// Price the full sweep and emit the table.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Write d1/d2 samples, stats and qq data.
    Diagnose {
        #[command(flatten)]
        common: Common,
    },
    /// Check the rate moments against Monte Carlo oracles.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Desk,
    Full,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// mc|go|kk|mm|all; overrides the scenario's method list.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output directory; tables go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
}

impl Common {
    fn load(&self) -> BenchResult<Scenario> {
        let mut s = Scenario::load(&self.scenario)?;
        if let Some(m) = &self.method {
            s.methods = Method::parse(m)?;
        }
        let overrides = SimOverrides {
            profile: self.profile.map(|p| match p {
                ProfileArg::Desk => Profile::Desk,
                ProfileArg::Full => Profile::Full,
            }),
            paths: self.paths,
            dt: self.dt,
            seed: self.seed,
            antithetic: None,
            control_variate: None,
        };
        s.sim = apply_sim(s.sim, &overrides);
        s.check()?;
        Ok(s)
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

fn write_output(out: Option<&Path>, file: &str, text: &str) -> BenchResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(file);
            std::fs::write(&path, text)?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn report(table: &ResultTable) -> BenchResult<()> {
    for r in &table.rows {
        if let Some(secs) = r.seconds_per_price {
            eprintln!("timing {} {:.3e} s/price", r.method, secs);
        }
    }
    let failures = table.failures();
    for f in &failures {
        eprintln!("failed cell: {f}");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(BenchError::CellFailures(failures.len()))
    }
}

fn run(cli: Cli) -> BenchResult<()> {
    match cli.verb {
        Verb::Price { common, cell } => {
            let s = common.load()?.single_cell(cell)?;
            let table = run_scenario(&s)?;
            let fmt = common.format();
            write_output(
                common.out.as_deref(),
                &format!("{}_cell{cell}.{}", s.name, fmt.extension()),
                &emit_table(&table, fmt),
            )?;
            report(&table)
        }
        Verb::Sweep { common } => {
            let s = common.load()?;
            let table = run_scenario(&s)?;
            let fmt = common.format();
            write_output(common.out.as_deref(), &format!("{}.{}", s.name, fmt.extension()), &emit_table(&table, fmt))?;
            report(&table)
        }
        Verb::Diagnose { common } => {
            let s = common.load()?;
            let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for f in emit_diagnostics(&s, &out)? {
                println!("{}", f.display());
            }
            Ok(())
        }
        Verb::Validate { common } => {
            let s = common.load()?;
            let (_, rate) = s.cell(0)?;
            let p = rate
                .cir()
                .ok_or_else(|| BenchError::Invalid("validate needs the cir rate model".into()))?;
            let checks = validate_moments(&p, s.contract.maturity, &s.sim)?;
            write_output(common.out.as_deref(), &format!("{}_validate.csv", s.name), &render_checks(&checks))?;
            for c in checks.iter().filter(|c| !c.pass) {
                eprintln!("failed check: {} (z = {:.2})", c.name, c.z);
            }
            require_all(&checks)
        }
    }
}

/// 0 on success, 1 for invalid input (including usage errors), 2 for
/// numerical failures.
fn execute<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(execute(std::env::args_os()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(name: &str) -> String {
        format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"))
    }

    fn sweep_into(dir: &Path, extra: &[&str]) -> u8 {
        let table1 = scenario("table1");
        let out = dir.to_str().unwrap();
        let mut args = vec!["cirmm", "sweep", "--scenario", &table1, "--paths", "2000", "--dt", "0.01", "--out", out];
        args.extend_from_slice(extra);
        execute(args)
    }

    #[test]
    fn sweep_output_is_byte_identical_across_runs() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(sweep_into(a.path(), &["--seed", "5"]), 0);
        assert_eq!(sweep_into(b.path(), &["--seed", "5"]), 0);
        let fa = std::fs::read(a.path().join("table1.csv")).unwrap();
        let fb = std::fs::read(b.path().join("table1.csv")).unwrap();
        assert_eq!(fa, fb);
        assert_eq!(sweep_into(b.path(), &["--seed", "6"]), 0);
        assert_ne!(fa, std::fs::read(b.path().join("table1.csv")).unwrap());
    }

    #[test]
    fn markdown_goes_to_md_file() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(sweep_into(dir.path(), &["--format", "markdown", "--method", "mm"]), 0);
        let text = std::fs::read_to_string(dir.path().join("table1.md")).unwrap();
        assert!(text.starts_with("|section|rho|"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn price_verb_emits_one_cell() {
        let dir = tempfile::tempdir().unwrap();
        let table1 = scenario("table1");
        let out = dir.path().to_str().unwrap();
        let code = execute(["cirmm", "price", "--scenario", &table1, "--method", "kk", "--cell", "3", "--out", out]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(dir.path().join("table1_cell3.csv")).unwrap();
        assert_eq!(text, "section,rho,0\nprice,KK,8.2309\n");
        assert_eq!(execute(["cirmm", "price", "--scenario", &table1, "--cell", "9"]), 1);
    }

    #[test]
    fn exit_codes() {
        let table1 = scenario("table1");
        assert_eq!(execute(["cirmm", "sweep", "--scenario", "/nonexistent.toml"]), 1);
        assert_eq!(execute(["cirmm", "sweep", "--scenario", &table1, "--method", "xx"]), 1);
        assert_eq!(execute(["cirmm", "sweep", "--scenario", &table1, "--bogus"]), 1);
        assert_eq!(execute(["cirmm", "sweep", "--scenario", &table1, "--paths", "1001", "--method", "mc"]), 1);
        assert_eq!(execute(["cirmm", "frobnicate"]), 1);

        let dir = tempfile::tempdir().unwrap();
        let text = std::fs::read_to_string(&table1).unwrap() + "\n[go]\ndamping = 0.5\n";
        let path = dir.path().join("bad-damping.toml");
        std::fs::write(&path, text).unwrap();
        let out = dir.path().to_str().unwrap();
        let code = execute(["cirmm", "sweep", "--scenario", path.to_str().unwrap(), "--method", "go", "--out", out]);
        assert_eq!(code, 2);
        // the table is still written, with failure markers
        assert!(std::fs::read_to_string(dir.path().join("table1.csv")).unwrap().contains("FAIL"));
    }

    #[test]
    fn diagnose_and_validate_write_reports() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let fig = scenario("figure-dothan");
        assert_eq!(execute(["cirmm", "diagnose", "--scenario", &fig, "--paths", "200", "--out", out]), 0);
        assert!(dir.path().join("figure-dothan_T5_stats.json").exists());

        let table1 = scenario("table1");
        let code = execute(["cirmm", "validate", "--scenario", &table1, "--paths", "400", "--dt", "0.01", "--out", out]);
        let report = std::fs::read_to_string(dir.path().join("table1_validate.csv")).unwrap();
        assert!(report.starts_with("check,closed_form,estimate,std_error,z,status"));
        assert_eq!(code == 0, !report.contains(",FAIL"));
    }
}
