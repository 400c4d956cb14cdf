//! Bat algorithm with frequency-tuned velocities, loudness and pulse rate.
//!
//! For bat `i` at iteration `t` (1-based), with global best `x*`:
//!
//! ```text
//! f_i   = f_min + (f_max - f_min) * U(0,1)
//! v_i  += (x_i - x*) * f_i
//! cand  = clamp(x_i + v_i)
//! if U(0,1) > r_i:  cand = clamp(x* + eps * mean(A) * walk_scale * width),  eps ~ U(-1,1) per dim
//! accept cand if f(cand) is strictly better than f(x_i) and U(0,1) < A_i:
//!     x_i = cand;  A_i *= alpha_loudness;  r_i = r0 * (1 - exp(-gamma_rate * t))
//! ```
//!
//! The global best is updated whenever any evaluated candidate beats it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    rng_stream, Bounds, Budget, Encoding, Evaluator, Genome, Problem, RunError, RunRecord,
    SOLVER_STREAM,
};

pub const ALGORITHM_ID: &str = "ba";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaParams {
    pub population_size: usize,
    pub f_min: f64,
    pub f_max: f64,
    /// Initial loudness A0.
    pub loudness: f64,
    /// Pulse-rate ceiling r0.
    pub pulse_rate: f64,
    pub alpha_loudness: f64,
    pub gamma_rate: f64,
    /// Local-walk step as a fraction of each box side, before loudness scaling.
    pub walk_scale: f64,
}

impl Default for BaParams {
    fn default() -> Self {
        Self {
            population_size: 30,
            f_min: 0.0,
            f_max: 2.0,
            loudness: 0.9,
            pulse_rate: 0.5,
            alpha_loudness: 0.97,
            gamma_rate: 0.1,
            walk_scale: 0.01,
        }
    }
}

impl BaParams {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |msg: &str| Err(RunError::InvalidParams(format!("ba: {msg}")));
        if self.population_size == 0 {
            return bad("population_size must be at least 1");
        }
        if !(self.f_min <= self.f_max) {
            return bad("f_min must not exceed f_max");
        }
        if !(self.loudness > 0.0) {
            return bad("loudness must be positive");
        }
        if !(0.0..=1.0).contains(&self.pulse_rate) {
            return bad("pulse_rate must lie in [0, 1]");
        }
        if !(self.alpha_loudness > 0.0 && self.alpha_loudness < 1.0) {
            return bad("alpha_loudness must lie in (0, 1)");
        }
        if !(self.gamma_rate > 0.0) {
            return bad("gamma_rate must be positive");
        }
        if !(self.walk_scale > 0.0) {
            return bad("walk_scale must be positive");
        }
        Ok(())
    }
}

struct Bat {
    position: Vec<f64>,
    velocity: Vec<f64>,
    fitness: f64,
    loudness: f64,
    pulse_rate: f64,
}

pub fn run(
    problem: &Problem<'_>,
    params: &BaParams,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    run_from(problem, params, budget, seed, None)
}

/// Runs BA with the given initial positions (one per bat) or uniform random
/// ones when `None`. Initial velocities are zero.
pub fn run_from(
    problem: &Problem<'_>,
    params: &BaParams,
    budget: &Budget,
    seed: u64,
    initial: Option<&[Vec<f64>]>,
) -> Result<RunRecord, RunError> {
    let bounds: &[Bounds] = match &problem.encoding {
        Encoding::RealVector { bounds } => bounds,
        other => return Err(RunError::mismatch(ALGORITHM_ID, other.kind())),
    };
    problem.encoding.validate()?;
    params.validate()?;
    let mut evaluator = Evaluator::new(problem.objective, problem.sense, *budget)?;
    let sense = problem.sense;
    let mut rng = rng_stream(seed, SOLVER_STREAM);
    let dims = bounds.len();

    let starts: Vec<Vec<f64>> = match initial {
        Some(xs) => {
            if xs.len() != params.population_size
                || xs.iter().any(|x| !problem.encoding.conforms(&Genome::Real(x.clone())))
            {
                return Err(RunError::InvalidInitial);
            }
            xs.to_vec()
        }
        None => (0..params.population_size)
            .map(|_| match problem.encoding.sample(&mut rng) {
                Genome::Real(x) => x,
                _ => unreachable!("real encoding samples real genomes"),
            })
            .collect(),
    };

    let mut bats = Vec::with_capacity(params.population_size);
    for position in starts {
        let Some(fitness) = evaluator.evaluate(&Genome::Real(position.clone())) else {
            break;
        };
        bats.push(Bat {
            position,
            velocity: vec![0.0; dims],
            fitness,
            loudness: params.loudness,
            pulse_rate: 0.0,
        });
    }
    let Some(first) = bats.first() else {
        return Err(RunError::NoEvaluations);
    };
    let mut best = (first.position.clone(), first.fitness);
    for bat in &bats[1..] {
        if sense.is_better(bat.fitness, best.1) {
            best = (bat.position.clone(), bat.fitness);
        }
    }

    let mut t: u64 = 0;
    'flight: while !evaluator.is_stopped() {
        t += 1;
        let mean_loudness = bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64;
        for bat in bats.iter_mut() {
            let freq = params.f_min + (params.f_max - params.f_min) * rng.random::<f64>();
            let mut candidate = Vec::with_capacity(dims);
            for d in 0..dims {
                bat.velocity[d] += (bat.position[d] - best.0[d]) * freq;
                candidate.push(bounds[d].clamp(bat.position[d] + bat.velocity[d]));
            }
            if rng.random::<f64>() > bat.pulse_rate {
                for d in 0..dims {
                    let eps = rng.random_range(-1.0..=1.0);
                    let step = eps * mean_loudness * params.walk_scale * bounds[d].width();
                    candidate[d] = bounds[d].clamp(best.0[d] + step);
                }
            }
            let genome = Genome::Real(candidate);
            let Some(f) = evaluator.evaluate(&genome) else {
                break 'flight;
            };
            let Genome::Real(candidate) = genome else { unreachable!() };
            if sense.is_better(f, bat.fitness) && rng.random::<f64>() < bat.loudness {
                bat.position.clone_from(&candidate);
                bat.fitness = f;
                bat.loudness *= params.alpha_loudness;
                bat.pulse_rate = params.pulse_rate * (1.0 - (-params.gamma_rate * t as f64).exp());
            }
            if sense.is_better(f, best.1) {
                best = (candidate, f);
            }
        }
        evaluator.end_iteration();
    }
    let config = serde_json::to_value(params).expect("params serialize");
    evaluator.finish(ALGORITHM_ID, config, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{ObjectiveSense, RealFn};
    use std::cell::RefCell;

    #[test]
    fn without_frequency_only_local_walks_move() {
        let seen: RefCell<Vec<Vec<f64>>> = RefCell::new(Vec::new());
        let f = RealFn(|x: &[f64]| {
            seen.borrow_mut().push(x.to_vec());
            1.0
        });
        let problem = Problem::new(&f, Encoding::real_box(2, -5.0, 5.0), ObjectiveSense::Minimize);
        let params = BaParams {
            population_size: 3,
            f_min: 0.0,
            f_max: 0.0,
            ..BaParams::default()
        };
        let starts = vec![vec![1.0, 2.0], vec![-3.0, 0.5], vec![4.0, -4.0]];
        run_from(&problem, &params, &Budget::iterations(10), 5, Some(&starts)).unwrap();
        // flat objective: nothing is accepted and the best stays at starts[0]
        let reach = params.loudness * params.walk_scale * 10.0;
        for x in seen.into_inner() {
            let near_best = x.iter().zip(&starts[0]).all(|(a, b)| (a - b).abs() <= reach + 1e-12);
            assert!(starts.contains(&x) || near_best, "{x:?}");
        }
    }

    #[test]
    fn single_bat_at_optimum_stays() {
        let f = RealFn(|x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2));
        let problem = Problem::new(&f, Encoding::real_box(2, -5.0, 5.0), ObjectiveSense::Minimize);
        let params = BaParams {
            population_size: 1,
            ..BaParams::default()
        };
        let rec = run_from(&problem, &params, &Budget::evaluations(2_000), 1, Some(&[vec![1.0, -2.0]])).unwrap();
        assert_eq!(rec.best_fitness, 0.0);
        assert_eq!(rec.best.value, Genome::Real(vec![1.0, -2.0]));
    }

    #[test]
    fn evaluations_stay_in_box() {
        let seen: RefCell<Vec<Vec<f64>>> = RefCell::new(Vec::new());
        let f = RealFn(|x: &[f64]| {
            seen.borrow_mut().push(x.to_vec());
            -x.iter().sum::<f64>()
        });
        let problem = Problem::new(&f, Encoding::real_box(3, -1.0, 2.0), ObjectiveSense::Minimize);
        run(&problem, &BaParams::default(), &Budget::evaluations(3_000), 8).unwrap();
        assert!(seen.into_inner().iter().flatten().all(|v| (-1.0..=2.0).contains(v)));
    }

    #[test]
    fn rejects_bitstrings() {
        let f = |_: &Genome| 0.0;
        let problem = Problem::new(&f, Encoding::bitstring(4), ObjectiveSense::Minimize);
        assert!(matches!(
            run(&problem, &BaParams::default(), &Budget::evaluations(10), 0),
            Err(RunError::EncodingMismatch { .. })
        ));
    }

    #[test]
    fn frequency_range_checked() {
        let p = BaParams {
            f_min: 2.0,
            f_max: 1.0,
            ..BaParams::default()
        };
        assert!(p.validate().is_err());
    }
}
