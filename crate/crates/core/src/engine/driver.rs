//! Uniform entry point: one problem, one algorithm configuration, one budget.

use serde::{Deserialize, Serialize};

use super::{Budget, Encoding, Objective, ObjectiveSense, RunError, RunRecord};
use crate::algorithms::{aco, ba, foa, ga, AcoParams, BaParams, FoaParams, GaParams};
use crate::benchmarks::DistanceMatrix;


/// What to optimize. `distances` is an optional heuristic for ACO.
pub struct Problem<'a> {
    pub objective: &'a dyn Objective,
    pub encoding: Encoding,
    pub sense: ObjectiveSense,
    pub distances: Option<&'a DistanceMatrix>,
}

impl<'a> Problem<'a> {
    pub fn new(objective: &'a dyn Objective, encoding: Encoding, sense: ObjectiveSense) -> Self {
        Self {
            objective,
            encoding,
            sense,
            distances: None,
        }
    }

    pub fn with_distances(mut self, distances: &'a DistanceMatrix) -> Self {
        self.distances = Some(distances);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "params", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Ga(GaParams),
    Aco(AcoParams),
    Foa(FoaParams),
    Ba(BaParams),
}

impl AlgorithmConfig {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmConfig::Ga(_) => ga::ALGORITHM_ID,
            AlgorithmConfig::Aco(_) => aco::ALGORITHM_ID,
            AlgorithmConfig::Foa(_) => foa::ALGORITHM_ID,
            AlgorithmConfig::Ba(_) => ba::ALGORITHM_ID,
        }
    }

    /// Default parameters for an algorithm id (`ga`, `aco`, `foa`, `ba`).
    pub fn default_for(id: &str) -> Option<Self> {
        Some(match id.to_ascii_lowercase().as_str() {
            "ga" => AlgorithmConfig::Ga(GaParams::default()),
            "aco" => AlgorithmConfig::Aco(AcoParams::default()),
            "foa" => AlgorithmConfig::Foa(FoaParams::default()),
            "ba" => AlgorithmConfig::Ba(BaParams::default()),
            _ => return None,
        })
    }
}

/// Runs the configured algorithm. Errors with `EncodingMismatch` when the
/// algorithm cannot handle the problem's encoding.
pub fn run_optimizer(
    problem: &Problem<'_>,
    config: &AlgorithmConfig,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    budget.validate()?;
    match config {
        AlgorithmConfig::Ga(p) => ga::run(problem, p, budget, seed),
        AlgorithmConfig::Aco(p) => aco::run(problem, p, budget, seed),
        AlgorithmConfig::Foa(p) => foa::run(problem, p, budget, seed),
        AlgorithmConfig::Ba(p) => ba::run(problem, p, budget, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Genome;

    #[test]
    fn dispatch_rejects_mismatched_encoding() {
        let f = |_: &Genome| 0.0;
        let problem = Problem::new(&f, Encoding::bitstring(5), ObjectiveSense::Maximize);
        for id in ["aco", "foa", "ba"] {
            let cfg = AlgorithmConfig::default_for(id).unwrap();
            let err = run_optimizer(&problem, &cfg, &Budget::evaluations(10), 0).unwrap_err();
            assert!(matches!(err, RunError::EncodingMismatch { .. }), "{id}");
        }
    }

    #[test]
    fn empty_budget_rejected() {
        let f = |_: &Genome| 0.0;
        let problem = Problem::new(&f, Encoding::bitstring(5), ObjectiveSense::Maximize);
        let cfg = AlgorithmConfig::default_for("ga").unwrap();
        assert!(matches!(
            run_optimizer(&problem, &cfg, &Budget::default(), 0),
            Err(RunError::InvalidBudget(_))
        ));
    }

    #[test]
    fn config_json_shape() {
        let cfg: AlgorithmConfig =
            serde_json::from_str(r#"{"algorithm":"ba","params":{"population_size":12}}"#).unwrap();
        match cfg {
            AlgorithmConfig::Ba(p) => assert_eq!(p.population_size, 12),
            _ => panic!(),
        }
    }
}
