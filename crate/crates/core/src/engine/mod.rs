//! Shared search machinery: encodings, objectives, budgets, deterministic
//! random streams and run records, plus the uniform solver driver.

mod budget;
mod driver;
mod encoding;
mod evaluator;
mod objective;
mod record;
mod rng;

use thiserror::Error;

pub use budget::Budget;
pub use driver::{run_optimizer, AlgorithmConfig, Problem};
pub use encoding::{
    is_permutation, validate_solution, Bounds, CandidateSolution, Encoding, EncodingError,
    EncodingKind, Gene, Genome, Slot,
};
pub(crate) use encoding::sample_slot;
pub use evaluator::{Evaluator, StopReason};
pub use objective::{Objective, ObjectiveSense, RealFn};
pub use record::RunRecord;
pub use rng::{rng_stream, RngStream, GENERATOR_STREAM, SOLVER_STREAM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("{algorithm} cannot operate on {encoding} encodings")]
    EncodingMismatch {
        algorithm: String,
        encoding: EncodingKind,
    },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("invalid encoding: {0}")]
    InvalidEncoding(#[from] EncodingError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("initial solution does not conform to the encoding")]
    InvalidInitial,
    #[error("run ended before any evaluation")]
    NoEvaluations,
}

impl RunError {
    pub(crate) fn mismatch(algorithm: &str, encoding: EncodingKind) -> Self {
        RunError::EncodingMismatch {
            algorithm: algorithm.to_string(),
            encoding,
        }
    }
}
