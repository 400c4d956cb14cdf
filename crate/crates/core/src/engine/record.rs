use serde::{Deserialize, Serialize};

use super::encoding::CandidateSolution;
use super::evaluator::StopReason;
use super::objective::ObjectiveSense;

/// Reproducible trace of one optimizer run.
///
/// JSON layout:
///
/// ```text
/// {
///   "algorithm": "ga",
///   "seed": 1,
///   "config": { ...solver parameters... },
///   "sense": "maximize",
///   "best": { "value": {"kind": "bits", "value": [...]}, "fitness": 20.0, "feasible": true },
///   "best_fitness": 20.0,
///   "evaluations": 1234,
///   "iterations": 24,
///   "wall_time_ms": 1.7,
///   "history": [[1, 9.0], [3, 11.0], ...],
///   "nonfinite_evaluations": 0,
///   "stop_reason": "target_reached"
/// }
/// ```
///
/// `history` holds `[evaluation count, best-so-far fitness]` pairs, one per
/// improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub sense: ObjectiveSense,
    pub best: CandidateSolution,
    pub best_fitness: f64,
    pub evaluations: u64,
    pub iterations: u64,
    pub wall_time_ms: f64,
    pub history: Vec<(u64, f64)>,
    pub nonfinite_evaluations: u64,
    pub stop_reason: StopReason,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run record serializes")
    }

    /// The record with wall time zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> RunRecord {
        RunRecord {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }

    /// Whether the best-so-far history never gets worse.
    pub fn history_is_monotone(&self) -> bool {
        self.history.windows(2).all(|w| {
            w[0].0 < w[1].0 && self.sense.is_at_least(w[1].1, w[0].1)
        })
    }
}
