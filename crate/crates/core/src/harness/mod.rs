//! Command-line interface, batch experiments, instance generation and
//! timing reports.

pub mod bench;
pub mod cli;
pub mod experiment;
pub mod generate;
pub mod report;

use std::path::Path;

use thiserror::Error;

use crate::benchmarks::BenchmarkError;
use crate::engine::RunError;
use crate::taxonomy::TaxonomyError;

pub use bench::{bench_ga_vs_dp, BenchConfig};
pub use cli::run_cli;
pub use experiment::{run_experiment, ExperimentCell, ExperimentResult, ExperimentSpec, ProblemFamily, SolverSpec};
pub use generate::{gen_knapsack, gen_series, gen_tsp};
pub use report::{emit_records, emit_report, loglog_slope, ReportFormat, TimingReport, TimingRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("{0}")]
    Invalid(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io(format!("{}: {e}", path.display()))
    }
}
