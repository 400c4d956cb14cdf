use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::encoding::{CandidateSolution, Genome};
use super::objective::{Objective, ObjectiveSense};
use super::record::RunRecord;
use super::{Budget, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxEvaluations,
    MaxIterations,
    TargetReached,
    WallTime,
    /// The solver ran out of things to do (e.g. exhausted a finite space).
    Exhausted,
}

/// Counts evaluations against a [`Budget`] and tracks the best-so-far
/// solution and its history.
///
/// Solvers never call the objective directly. `evaluate` refuses once any
/// limit is reached, so no solver can exceed `max_evaluations`.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    sense: ObjectiveSense,
    budget: Budget,
    evaluations: u64,
    iterations: u64,
    nonfinite: u64,
    best: Option<CandidateSolution>,
    history: Vec<(u64, f64)>,
    started: Instant,
    stop: Option<StopReason>,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        objective: &'a dyn Objective,
        sense: ObjectiveSense,
        budget: Budget,
    ) -> Result<Self, RunError> {
        budget.validate()?;
        Ok(Self {
            objective,
            sense,
            budget,
            evaluations: 0,
            iterations: 0,
            nonfinite: 0,
            best: None,
            history: Vec::new(),
            started: Instant::now(),
            stop: None,
        })
    }

    pub fn sense(&self) -> ObjectiveSense {
        self.sense
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn is_stopped(&self) -> bool {
        self.stop.is_some()
    }

    pub fn best(&self) -> Option<&CandidateSolution> {
        self.best.as_ref()
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.best.as_ref().and_then(|b| b.fitness)
    }

    pub fn repair(&self, value: &mut Genome) {
        self.objective.repair(value);
    }

    /// Evaluates `value`, or returns `None` without evaluating once the run
    /// has stopped. Non-finite objective values come back as the worst
    /// fitness and are counted.
    pub fn evaluate(&mut self, value: &Genome) -> Option<f64> {
        if self.stop.is_some() {
            return None;
        }
        self.evaluations += 1;
        let (fitness, replaced) = self.sense.sanitize(self.objective.evaluate(value));
        if replaced {
            self.nonfinite += 1;
        }
        let improved = match self.best_fitness() {
            None => true,
            Some(best) => self.sense.is_better(fitness, best),
        };
        if improved {
            self.best = Some(CandidateSolution::evaluated(value.clone(), fitness));
            self.history.push((self.evaluations, fitness));
        }
        self.check_limits();
        Some(fitness)
    }

    /// Marks the end of one solver iteration. Returns whether the run may
    /// continue.
    pub fn end_iteration(&mut self) -> bool {
        self.iterations += 1;
        if self.stop.is_none() {
            if let Some(limit) = self.budget.iteration_limit() {
                if self.iterations >= limit {
                    self.stop = Some(StopReason::MaxIterations);
                }
            }
        }
        self.check_limits();
        self.stop.is_none()
    }

    /// Stops the run for a solver-specific reason.
    pub fn halt(&mut self, reason: StopReason) {
        self.stop.get_or_insert(reason);
    }

    fn check_limits(&mut self) {
        if self.stop.is_some() {
            return;
        }
        if let Some(limit) = self.budget.eval_limit() {
            if self.evaluations >= limit {
                self.stop = Some(StopReason::MaxEvaluations);
                return;
            }
        }
        if let (Some(target), Some(best)) = (self.budget.target_fitness, self.best_fitness()) {
            if self.sense.is_at_least(best, target) {
                self.stop = Some(StopReason::TargetReached);
                return;
            }
        }
        if let Some(limit) = self.budget.max_wall_time {
            if self.started.elapsed() >= limit {
                self.stop = Some(StopReason::WallTime);
            }
        }
    }

    /// Closes the run and produces its record.
    pub fn finish(
        self,
        algorithm: &str,
        config: serde_json::Value,
        seed: u64,
    ) -> Result<RunRecord, RunError> {
        let wall_time_ms = self.started.elapsed().as_secs_f64() * 1e3;
        let best = self.best.ok_or(RunError::NoEvaluations)?;
        let best_fitness = best.fitness.unwrap_or(self.sense.worst());
        Ok(RunRecord {
            algorithm: algorithm.to_string(),
            seed,
            config,
            sense: self.sense,
            best,
            best_fitness,
            evaluations: self.evaluations,
            iterations: self.iterations,
            wall_time_ms,
            history: self.history,
            nonfinite_evaluations: self.nonfinite,
            stop_reason: self.stop.unwrap_or(StopReason::Exhausted),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_bits(g: &Genome) -> f64 {
        g.as_bits().unwrap().iter().filter(|&&b| b).count() as f64
    }

    #[test]
    fn refuses_past_eval_limit() {
        let mut ev = Evaluator::new(&sum_bits, ObjectiveSense::Maximize, Budget::evaluations(2)).unwrap();
        let g = Genome::Bits(vec![true]);
        assert!(ev.evaluate(&g).is_some());
        assert!(ev.evaluate(&g).is_some());
        assert!(ev.is_stopped());
        assert!(ev.evaluate(&g).is_none());
        assert_eq!(ev.evaluations(), 2);
    }

    #[test]
    fn history_records_only_improvements() {
        let mut ev = Evaluator::new(&sum_bits, ObjectiveSense::Maximize, Budget::evaluations(10)).unwrap();
        for bits in [vec![false, false], vec![true, false], vec![false, true], vec![true, true]] {
            ev.evaluate(&Genome::Bits(bits));
        }
        let rec = ev.finish("test", serde_json::Value::Null, 0).unwrap();
        assert_eq!(rec.history, vec![(1, 0.0), (2, 1.0), (4, 2.0)]);
        // tie at evaluation 3 keeps the earlier discovery
        assert_eq!(rec.best.value, Genome::Bits(vec![true, true]));
    }

    #[test]
    fn nan_is_worst_and_flagged() {
        let obj = |g: &Genome| if g.as_bits().unwrap()[0] { f64::NAN } else { 5.0 };
        let mut ev = Evaluator::new(&obj, ObjectiveSense::Minimize, Budget::evaluations(10)).unwrap();
        assert_eq!(ev.evaluate(&Genome::Bits(vec![true])), Some(f64::INFINITY));
        assert_eq!(ev.evaluate(&Genome::Bits(vec![false])), Some(5.0));
        let rec = ev.finish("test", serde_json::Value::Null, 0).unwrap();
        assert_eq!(rec.nonfinite_evaluations, 1);
        assert_eq!(rec.best_fitness, 5.0);
    }

    #[test]
    fn target_stops_the_run() {
        let budget = Budget::evaluations(100).with_target(1.0);
        let mut ev = Evaluator::new(&sum_bits, ObjectiveSense::Maximize, budget).unwrap();
        ev.evaluate(&Genome::Bits(vec![false]));
        assert!(!ev.is_stopped());
        ev.evaluate(&Genome::Bits(vec![true]));
        assert!(ev.is_stopped());
        let rec = ev.finish("t", serde_json::Value::Null, 0).unwrap();
        assert_eq!(rec.stop_reason, StopReason::TargetReached);
    }

    #[test]
    fn iteration_limit() {
        let mut ev = Evaluator::new(&sum_bits, ObjectiveSense::Maximize, Budget::iterations(2)).unwrap();
        assert!(ev.end_iteration());
        assert!(!ev.end_iteration());
        assert!(ev.evaluate(&Genome::Bits(vec![true])).is_none());
    }

    #[test]
    fn invalid_budget_rejected() {
        assert!(matches!(
            Evaluator::new(&sum_bits, ObjectiveSense::Maximize, Budget::default()),
            Err(RunError::InvalidBudget(_))
        ));
    }
}
