//! Fruit fly optimization as ball sampling around an incumbent.
//!
//! Each iteration the swarm scatters `swarm_size` flies uniformly in the
//! ball of the current radius around the incumbent (clamped to the box).
//! Smell is the objective value. The incumbent flies to the best-smelling
//! sample only if it is strictly better. The radius after `k` completed
//! iterations is `initial_radius * radius_decay^k`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::engine::{
    rng_stream, Bounds, Budget, Encoding, Evaluator, Genome, Problem, RunError, RunRecord,
    SOLVER_STREAM,
};

pub const ALGORITHM_ID: &str = "foa";

/// Fraction of the widest box side used as the default initial radius.
pub const DEFAULT_RADIUS_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FoaParams {
    pub swarm_size: usize,
    /// Initial sampling radius; `None` means 10% of the widest box side.
    pub search_radius: Option<f64>,
    pub radius_decay: f64,
}

impl Default for FoaParams {
    fn default() -> Self {
        Self {
            swarm_size: 20,
            search_radius: None,
            radius_decay: 0.99,
        }
    }
}

impl FoaParams {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |msg: &str| Err(RunError::InvalidParams(format!("foa: {msg}")));
        if self.swarm_size == 0 {
            return bad("swarm_size must be at least 1");
        }
        if let Some(r) = self.search_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("search_radius must be positive");
            }
        }
        if !(self.radius_decay > 0.0 && self.radius_decay <= 1.0) {
            return bad("radius_decay must lie in (0, 1]");
        }
        Ok(())
    }

    pub fn initial_radius(&self, bounds: &[Bounds]) -> f64 {
        self.search_radius.unwrap_or_else(|| {
            DEFAULT_RADIUS_FRACTION * bounds.iter().map(Bounds::width).fold(0.0, f64::max)
        })
    }
}

/// Uniform point in the `d`-ball of radius `radius` around `center`,
/// clamped to `bounds`.
pub fn sample_in_ball<R: Rng + ?Sized>(
    center: &[f64],
    radius: f64,
    bounds: &[Bounds],
    rng: &mut R,
) -> Vec<f64> {
    let d = center.len();
    let mut dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return center.to_vec();
    }
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    for v in dir.iter_mut() {
        *v *= r / norm;
    }
    center
        .iter()
        .zip(&dir)
        .zip(bounds)
        .map(|((c, v), b)| b.clamp(c + v))
        .collect()
}

/// Search state; exposed so callers can drive iterations one at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct FruitFlySwarm {
    incumbent: Vec<f64>,
    smell: f64,
    initial_radius: f64,
    decay: f64,
    iteration: u32,
}

impl FruitFlySwarm {
    pub fn incumbent(&self) -> &[f64] {
        &self.incumbent
    }

    pub fn smell(&self) -> f64 {
        self.smell
    }

    pub fn iterations(&self) -> u32 {
        self.iteration
    }

    pub fn radius(&self) -> f64 {
        self.initial_radius * self.decay.powi(self.iteration as i32)
    }

    /// One swarm iteration. Returns false if the budget ran out before
    /// every fly was evaluated; the radius then does not shrink.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        bounds: &[Bounds],
        swarm_size: usize,
        evaluator: &mut Evaluator<'_>,
        rng: &mut R,
    ) -> bool {
        let radius = self.radius();
        let sense = evaluator.sense();
        let mut best: Option<(Vec<f64>, f64)> = None;
        let mut complete = true;
        for _ in 0..swarm_size {
            let x = sample_in_ball(&self.incumbent, radius, bounds, rng);
            let genome = Genome::Real(x);
            let Some(f) = evaluator.evaluate(&genome) else {
                complete = false;
                break;
            };
            if best.as_ref().is_none_or(|(_, bf)| sense.is_better(f, *bf)) {
                let Genome::Real(x) = genome else { unreachable!() };
                best = Some((x, f));
            }
        }
        if let Some((x, f)) = best {
            if sense.is_better(f, self.smell) {
                self.incumbent = x;
                self.smell = f;
            }
        }
        if complete {
            self.iteration += 1;
        }
        complete
    }
}

fn real_bounds<'e>(encoding: &'e Encoding) -> Result<&'e [Bounds], RunError> {
    match encoding {
        Encoding::RealVector { bounds } => Ok(bounds),
        other => Err(RunError::mismatch(ALGORITHM_ID, other.kind())),
    }
}

/// Runs FOA from a uniform random start.
pub fn run(
    problem: &Problem<'_>,
    params: &FoaParams,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    run_from(problem, params, budget, seed, None)
}

/// Runs FOA from `start` (or a uniform random point when `None`).
pub fn run_from(
    problem: &Problem<'_>,
    params: &FoaParams,
    budget: &Budget,
    seed: u64,
    start: Option<&[f64]>,
) -> Result<RunRecord, RunError> {
    let bounds = real_bounds(&problem.encoding)?;
    problem.encoding.validate()?;
    params.validate()?;
    let mut evaluator = Evaluator::new(problem.objective, problem.sense, *budget)?;
    let mut rng = rng_stream(seed, SOLVER_STREAM);
    let start = match start {
        Some(x) => {
            let g = Genome::Real(x.to_vec());
            if !problem.encoding.conforms(&g) {
                return Err(RunError::InvalidInitial);
            }
            g
        }
        None => problem.encoding.sample(&mut rng),
    };
    let smell = evaluator.evaluate(&start).ok_or(RunError::NoEvaluations)?;
    let Genome::Real(incumbent) = start else { unreachable!() };
    let mut swarm = FruitFlySwarm {
        incumbent,
        smell,
        initial_radius: params.initial_radius(bounds),
        decay: params.radius_decay,
        iteration: 0,
    };
    while !evaluator.is_stopped() {
        if swarm.step(bounds, params.swarm_size, &mut evaluator, &mut rng) {
            evaluator.end_iteration();
        }
    }
    let config = serde_json::to_value(params).expect("params serialize");
    evaluator.finish(ALGORITHM_ID, config, seed)
}
