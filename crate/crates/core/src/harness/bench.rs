//! Wall-time comparison of the knapsack DP against the GA.
//!
//! For each size `n` a seeded instance with `W = ceil(tightness * sum w)` is
//! generated. Each solver runs once untimed as a warm-up, then `repetitions`
//! timed runs follow, one after another on the calling thread. The row
//! records the median time. The GA row's `best_value` is the worst value
//! over its repetitions, so `ratio` is a lower bound on solution quality.
//!
//! The GA budget is a fixed number of evaluations independent of `n`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{median, TimingReport, TimingRow};
use super::HarnessError;
use crate::algorithms::{ga, GaParams};
use crate::benchmarks::knapsack::DEFAULT_DP_CELL_CAP;
use crate::benchmarks::{knapsack_dp_capped, KnapsackInstance, KnapsackObjective};
use crate::engine::{Budget, Encoding, ObjectiveSense, Problem};

pub const DEFAULT_GA_EVALUATIONS: u64 = 50_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub tightness: f64,
    pub repetitions: usize,
    pub seed: u64,
    pub ga_evaluations: u64,
    pub ga_params: GaParams,
    pub dp_cell_cap: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![100, 200, 400, 800],
            tightness: 0.5,
            repetitions: 3,
            seed: 0,
            ga_evaluations: DEFAULT_GA_EVALUATIONS,
            ga_params: GaParams::default(),
            dp_cell_cap: DEFAULT_DP_CELL_CAP,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Invalid(m.to_string()));
        if self.sizes.is_empty() {
            return bad("bench needs at least one size");
        }
        if self.sizes.contains(&0) {
            return bad("sizes must be positive");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if !(self.tightness > 0.0 && self.tightness <= 1.0) {
            return bad("tightness must lie in (0, 1]");
        }
        if self.ga_evaluations == 0 {
            return bad("GA evaluation budget must be positive");
        }
        Ok(())
    }

    /// Seed of the instance generated for size `n`.
    pub fn instance_seed(&self, n: usize) -> u64 {
        self.seed.wrapping_add(n as u64)
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn bench_ga_vs_dp(config: &BenchConfig) -> Result<TimingReport, HarnessError> {
    config.validate()?;
    let mut report = TimingReport::default();
    for &n in &config.sizes {
        let instance = KnapsackInstance::random_uniform(n, config.tightness, config.instance_seed(n));
        let capacity = Some(instance.capacity);

        let optimum = knapsack_dp_capped(&instance, config.dp_cell_cap)?.value;
        let mut dp_times = Vec::with_capacity(config.repetitions);
        for _ in 0..config.repetitions {
            let start = Instant::now();
            let sol = knapsack_dp_capped(&instance, config.dp_cell_cap)?;
            dp_times.push(elapsed_ms(start));
            debug_assert_eq!(sol.value, optimum);
        }
        report.rows.push(TimingRow {
            n,
            parameter: capacity,
            algorithm: "dp".into(),
            median_ms: median(&dp_times),
            best_value: optimum,
            optimum: Some(optimum),
            ratio: Some(1.0),
        });

        let objective = KnapsackObjective::new(instance);
        let problem = Problem::new(&objective, Encoding::bitstring(n), ObjectiveSense::Maximize);
        let budget = Budget::evaluations(config.ga_evaluations);
        ga::run(&problem, &config.ga_params, &budget, config.seed)?;
        let mut ga_times = Vec::with_capacity(config.repetitions);
        let mut worst = f64::INFINITY;
        for rep in 0..config.repetitions {
            let seed = config.seed.wrapping_add(rep as u64);
            let start = Instant::now();
            let record = ga::run(&problem, &config.ga_params, &budget, seed)?;
            ga_times.push(elapsed_ms(start));
            worst = worst.min(record.best_fitness);
        }
        report.rows.push(TimingRow {
            n,
            parameter: capacity,
            algorithm: "ga".into(),
            median_ms: median(&ga_times),
            best_value: worst,
            optimum: Some(optimum),
            ratio: Some(if optimum > 0.0 { worst / optimum } else { 1.0 }),
        });
    }
    report.compute_slopes();
    let mut settings = BTreeMap::new();
    settings.insert("tightness".into(), config.tightness.into());
    settings.insert("repetitions".into(), config.repetitions.into());
    settings.insert("seed".into(), config.seed.into());
    settings.insert("ga_evaluations".into(), config.ga_evaluations.into());
    report.settings = settings;
    Ok(report)
}
