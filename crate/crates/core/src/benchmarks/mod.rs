//! Benchmark problems and their exact or baseline oracles.

pub mod functions;
pub mod holt_winters;
pub mod io;
pub mod knapsack;
pub mod tsp;

use thiserror::Error;

pub use functions::{test_function, TestFunction};
pub use holt_winters::{
    hw_encoding, hw_fit_sse, hw_grid_oracle, synthetic_seasonal, GridFit, HoltWintersObjective,
    HoltWintersParams, TimeSeries,
};
pub use knapsack::{
    knapsack_brute_force, knapsack_dp, knapsack_dp_capped, knapsack_ga_decode,
    knapsack_greedy_dantzig, knapsack_meet_in_middle, Item, KnapsackInstance, KnapsackObjective,
    KnapsackSolution,
};
pub use tsp::{
    tour_length, tsp_branch_and_bound, tsp_brute_force, DistanceMatrix, Metric, SearchStatus,
    TspInstance, TspSolution,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("instance too large for this method: n = {n}, limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("DP table needs {cells} cells, over the cap of {cap}")]
    CapacityOverflow { cells: u64, cap: u64 },
    #[error("tour is not a permutation of the instance's cities")]
    InvalidTour,
    #[error("observation {index} is not strictly positive")]
    NonPositiveSeries { index: usize },
    #[error("series has {len} observations, needs at least {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("coordinate {index} = {value} is outside the function's domain")]
    OutOfBounds { index: usize, value: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl BenchmarkError {
    pub(crate) fn io(e: std::io::Error) -> Self {
        BenchmarkError::Io(e.to_string())
    }
}
