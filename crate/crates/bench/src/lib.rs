//! Benchmark harness: scenario files, sweeps over ρ or η, table emission,
//! d1/d2 diagnostics and the moment validation report.

pub mod diagnostics;
pub mod emit;
pub mod error;
pub mod published;
pub mod run;
pub mod scenario;
pub mod validate;

pub use diagnostics::emit_diagnostics;
pub use emit::{emit_table, Format};
pub use error::{BenchError, BenchResult};
pub use run::{run_scenario, run_scenario_with, Cell, ResultTable, RunOptions};
pub use scenario::{Method, Scenario, SweepAxis};
