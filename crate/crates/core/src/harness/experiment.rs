//! Batch experiments: a problem family swept over sizes and instance seeds,
//! solved by one algorithm (or the family's exact oracle) several times per
//! cell.
//!
//! Cells are independent. With `concurrent = true` they run on the rayon
//! pool, unless `timed = true`, in which case they always run one at a time
//! on the calling thread.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::benchmarks::{
    knapsack_dp, tsp_branch_and_bound, KnapsackInstance, KnapsackObjective, Metric, SearchStatus,
    TestFunction, TspInstance,
};
use crate::engine::{
    run_optimizer, AlgorithmConfig, Budget, Encoding, ObjectiveSense, Problem, RealFn, RunRecord,
};

/// Largest TSP size for which optimizer cells also get an exact optimum.
pub const TSP_ORACLE_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProblemFamily {
    Knapsack {
        #[serde(default = "default_tightness")]
        tightness: f64,
    },
    Tsp {
        #[serde(default)]
        metric: Metric,
    },
    /// Sizes are dimensions.
    Function { function: TestFunction },
}

fn default_tightness() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverSpec {
    Oracle,
    #[serde(untagged)]
    Optimizer(AlgorithmConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: ProblemFamily,
    pub instance_seeds: Vec<u64>,
    pub sizes: Vec<usize>,
    pub solver: SolverSpec,
    #[serde(default = "one")]
    pub repetitions: usize,
    pub budget: Budget,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub concurrent: bool,
    #[serde(default)]
    pub timed: bool,
}

fn one() -> usize {
    1
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Invalid(m.to_string()));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.sizes.is_empty() || self.instance_seeds.is_empty() {
            return bad("need at least one size and one instance seed");
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes must be strictly increasing");
        }
        if let SolverSpec::Optimizer(_) = self.solver {
            self.budget.validate()?;
        }
        Ok(())
    }

    /// Solver seed for a repetition on a given instance.
    pub fn run_seed(instance_seed: u64, repetition: usize) -> u64 {
        instance_seed.wrapping_mul(1_000_003).wrapping_add(repetition as u64)
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| HarnessError::Invalid(format!("experiment spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentCell {
    pub n: usize,
    pub instance_seed: u64,
    pub repetition: usize,
    pub algorithm: String,
    pub best_value: f64,
    pub optimum: Option<f64>,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<RunRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub cells: Vec<ExperimentCell>,
}

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("experiment serializes");
        s.push('\n');
        s
    }

    /// Cells with timing fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Vec<ExperimentCell> {
        self.cells
            .iter()
            .map(|c| ExperimentCell {
                wall_time_ms: 0.0,
                record: c.record.as_ref().map(RunRecord::without_timing),
                ..c.clone()
            })
            .collect()
    }
}

struct CellKey {
    n: usize,
    instance_seed: u64,
    repetition: usize,
}

fn optimize(
    spec: &ExperimentSpec,
    config: &AlgorithmConfig,
    key: &CellKey,
) -> Result<(RunRecord, Option<f64>), HarnessError> {
    let seed = ExperimentSpec::run_seed(key.instance_seed, key.repetition);
    let n = key.n;
    Ok(match &spec.problem {
        ProblemFamily::Knapsack { tightness } => {
            let instance = KnapsackInstance::random_uniform(n, *tightness, key.instance_seed);
            let optimum = knapsack_dp(&instance).ok().map(|s| s.value);
            let objective = KnapsackObjective::new(instance);
            let problem = Problem::new(&objective, Encoding::bitstring(n), ObjectiveSense::Maximize);
            (run_optimizer(&problem, config, &spec.budget, seed)?, optimum)
        }
        ProblemFamily::Tsp { metric } => {
            let instance = TspInstance::random_uniform(n, key.instance_seed, *metric)?;
            let optimum = (n <= TSP_ORACLE_MAX).then(|| tsp_branch_and_bound(&instance, None).length);
            let dist = instance.distance_matrix();
            let objective = |g: &crate::engine::Genome| match g.as_permutation() {
                Some(t) => dist.cycle_length(t),
                None => f64::NAN,
            };
            let problem = Problem::new(&objective, Encoding::permutation(n), ObjectiveSense::Minimize)
                .with_distances(&dist);
            (run_optimizer(&problem, config, &spec.budget, seed)?, optimum)
        }
        ProblemFamily::Function { function } => {
            let f = *function;
            let objective = RealFn(move |x: &[f64]| f.value(x));
            let problem = Problem::new(&objective, f.encoding(n), ObjectiveSense::Minimize);
            (run_optimizer(&problem, config, &spec.budget, seed)?, Some(0.0))
        }
    })
}

fn oracle(spec: &ExperimentSpec, key: &CellKey) -> Result<(String, f64), HarnessError> {
    let n = key.n;
    Ok(match &spec.problem {
        ProblemFamily::Knapsack { tightness } => {
            let instance = KnapsackInstance::random_uniform(n, *tightness, key.instance_seed);
            ("dp".into(), knapsack_dp(&instance)?.value)
        }
        ProblemFamily::Tsp { metric } => {
            let instance = TspInstance::random_uniform(n, key.instance_seed, *metric)?;
            let sol = tsp_branch_and_bound(&instance, None);
            debug_assert_eq!(sol.status, SearchStatus::Complete);
            ("bnb".into(), sol.length)
        }
        ProblemFamily::Function { .. } => ("known-minimum".into(), 0.0),
    })
}

fn run_cell(spec: &ExperimentSpec, key: CellKey) -> Result<ExperimentCell, HarnessError> {
    let start = Instant::now();
    let (algorithm, best_value, optimum, record) = match &spec.solver {
        SolverSpec::Oracle => {
            let (alg, v) = oracle(spec, &key)?;
            (alg, v, Some(v), None)
        }
        SolverSpec::Optimizer(config) => {
            let (record, optimum) = optimize(spec, config, &key)?;
            (record.algorithm.clone(), record.best_fitness, optimum, Some(record))
        }
    };
    Ok(ExperimentCell {
        n: key.n,
        instance_seed: key.instance_seed,
        repetition: key.repetition,
        algorithm,
        best_value,
        optimum,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        record,
    })
}

/// Runs every (size, instance seed, repetition) cell, in that order, and
/// writes the result JSON to `spec.output` when set.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, HarnessError> {
    spec.validate()?;
    let mut keys = Vec::new();
    for &n in &spec.sizes {
        for &instance_seed in &spec.instance_seeds {
            for repetition in 0..spec.repetitions {
                keys.push(CellKey {
                    n,
                    instance_seed,
                    repetition,
                });
            }
        }
    }
    let cells: Vec<ExperimentCell> = if spec.concurrent && !spec.timed {
        keys.into_par_iter()
            .map(|k| run_cell(spec, k))
            .collect::<Result<_, _>>()?
    } else {
        keys.into_iter()
            .map(|k| run_cell(spec, k))
            .collect::<Result<_, _>>()?
    };
    let result = ExperimentResult {
        spec: spec.clone(),
        cells,
    };
    if let Some(path) = &spec.output {
        std::fs::write(path, result.to_json()).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(result)
}
