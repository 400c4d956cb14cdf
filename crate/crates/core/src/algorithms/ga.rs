//! Generational genetic algorithm with elitism and per-encoding operators.
//!
//! | encoding    | crossover            | mutation                 |
//! |-------------|----------------------|--------------------------|
//! | bitstring   | one-point or uniform | bit flip                 |
//! | permutation | order crossover      | swap                     |
//! | real vector | blend (BLX-alpha)    | gaussian, sigma × width  |
//! | mixed array | one-point or uniform | per-slot resample        |
//!
//! Offspring are repaired by the objective (if it repairs) before
//! evaluation, and the repaired value replaces the offspring.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::operators;
use crate::engine::{
    rng_stream, Budget, CandidateSolution, Encoding, Evaluator, Genome, ObjectiveSense, Problem,
    RunError, RunRecord, SOLVER_STREAM,
};

pub const ALGORITHM_ID: &str = "ga";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Selection {
    /// Best of `size` uniform draws with replacement.
    Tournament { size: usize },
    /// Fitness-proportional on fitness shifted so the worst individual
    /// still has a small positive weight.
    Roulette,
}

/// Crossover for bitstrings and mixed arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrayCrossover {
    OnePoint,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / length`.
    pub mutation_rate: Option<f64>,
    pub elitism_count: usize,
    pub selection: Selection,
    pub crossover: ArrayCrossover,
    pub blend_alpha: f64,
    /// Gaussian mutation scale as a fraction of each bound's width.
    pub mutation_sigma: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            crossover_rate: 0.9,
            mutation_rate: None,
            elitism_count: 2,
            selection: Selection::Tournament { size: 3 },
            crossover: ArrayCrossover::Uniform,
            blend_alpha: 0.5,
            mutation_sigma: 0.1,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |msg: &str| Err(RunError::InvalidParams(format!("ga: {msg}")));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if self.elitism_count >= self.population_size {
            return bad("elitism_count must be below population_size");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover_rate must lie in [0, 1]");
        }
        if let Some(m) = self.mutation_rate {
            if !(0.0..=1.0).contains(&m) {
                return bad("mutation_rate must lie in [0, 1]");
            }
        }
        if let Selection::Tournament { size } = self.selection {
            if size == 0 {
                return bad("tournament size must be positive");
            }
        }
        if !(self.blend_alpha >= 0.0) || !(self.mutation_sigma > 0.0) {
            return bad("blend_alpha must be >= 0 and mutation_sigma > 0");
        }
        Ok(())
    }

    fn mutation_rate_for(&self, encoding: &Encoding) -> f64 {
        self.mutation_rate
            .unwrap_or_else(|| 1.0 / encoding.len().max(1) as f64)
    }
}

/// Ranks population indices best first. Unevaluated individuals rank last;
/// equal fitness keeps population order.
fn rank(population: &[CandidateSolution], sense: ObjectiveSense) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    let key = |i: usize| population[i].fitness.unwrap_or(sense.worst());
    order.sort_by(|&a, &b| sense.cmp_fitness(key(a), key(b)));
    order
}

fn select<R: Rng + ?Sized>(
    population: &[CandidateSolution],
    sense: ObjectiveSense,
    selection: Selection,
    rng: &mut R,
) -> usize {
    let fit = |i: usize| population[i].fitness.unwrap_or(sense.worst());
    match selection {
        Selection::Tournament { size } => {
            let mut best = rng.random_range(0..population.len());
            for _ in 1..size {
                let challenger = rng.random_range(0..population.len());
                if sense.is_better(fit(challenger), fit(best)) {
                    best = challenger;
                }
            }
            best
        }
        Selection::Roulette => {
            let finite: Vec<f64> = (0..population.len())
                .map(fit)
                .filter(|f| f.is_finite())
                .collect();
            if finite.is_empty() {
                return rng.random_range(0..population.len());
            }
            let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let floor = ((hi - lo) * 1e-3).max(1e-12);
            let weights: Vec<f64> = (0..population.len())
                .map(|i| {
                    let f = fit(i);
                    if !f.is_finite() {
                        0.0
                    } else {
                        match sense {
                            ObjectiveSense::Maximize => f - lo + floor,
                            ObjectiveSense::Minimize => hi - f + floor,
                        }
                    }
                })
                .collect();
            let total: f64 = weights.iter().sum();
            let mut r = rng.random::<f64>() * total;
            for (i, w) in weights.iter().enumerate() {
                if r < *w {
                    return i;
                }
                r -= w;
            }
            population.len() - 1
        }
    }
}

fn crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    encoding: &Encoding,
    params: &GaParams,
    rng: &mut R,
) -> (Genome, Genome) {
    match (a, b, encoding) {
        (Genome::Bits(x), Genome::Bits(y), _) => {
            let (c1, c2) = match params.crossover {
                ArrayCrossover::OnePoint => operators::one_point(x, y, rng),
                ArrayCrossover::Uniform => operators::uniform(x, y, rng),
            };
            (Genome::Bits(c1), Genome::Bits(c2))
        }
        (Genome::Permutation(x), Genome::Permutation(y), _) => {
            let (c1, c2) = operators::order_crossover(x, y, rng);
            (Genome::Permutation(c1), Genome::Permutation(c2))
        }
        (Genome::Real(x), Genome::Real(y), Encoding::RealVector { bounds }) => {
            let (c1, c2) = operators::blend_crossover(x, y, params.blend_alpha, bounds, rng);
            (Genome::Real(c1), Genome::Real(c2))
        }
        (Genome::Mixed(x), Genome::Mixed(y), _) => {
            let (c1, c2) = match params.crossover {
                ArrayCrossover::OnePoint => operators::one_point(x, y, rng),
                ArrayCrossover::Uniform => operators::uniform(x, y, rng),
            };
            (Genome::Mixed(c1), Genome::Mixed(c2))
        }
        _ => (a.clone(), b.clone()),
    }
}

fn mutate<R: Rng + ?Sized>(g: &mut Genome, encoding: &Encoding, params: &GaParams, rng: &mut R) {
    let rate = params.mutation_rate_for(encoding);
    match (g, encoding) {
        (Genome::Bits(bits), _) => operators::bit_flip(bits, rate, rng),
        (Genome::Permutation(perm), _) => operators::swap_mutation(perm, rate, rng),
        (Genome::Real(xs), Encoding::RealVector { bounds }) => {
            operators::gaussian_mutation(xs, rate, params.mutation_sigma, bounds, rng)
        }
        (Genome::Mixed(genes), Encoding::Mixed { slots }) => {
            operators::resample_mutation(genes, slots, rate, rng)
        }
        _ => {}
    }
}

/// Produces the next generation.
///
/// The `elitism_count` best individuals are copied unchanged; the rest are
/// offspring of selected parents. If the budget runs out mid-generation the
/// remaining places are filled with the best unused individuals of the
/// current generation, so the size is always preserved.
pub fn ga_step<R: Rng + ?Sized>(
    population: &[CandidateSolution],
    encoding: &Encoding,
    evaluator: &mut Evaluator<'_>,
    params: &GaParams,
    rng: &mut R,
) -> Result<Vec<CandidateSolution>, RunError> {
    if population.len() != params.population_size {
        return Err(RunError::InvalidParams(format!(
            "ga: population has {} individuals, expected {}",
            population.len(),
            params.population_size
        )));
    }
    if population.iter().any(|ind| !encoding.conforms(&ind.value)) {
        return Err(RunError::mismatch(ALGORITHM_ID, encoding.kind()));
    }
    let sense = evaluator.sense();
    let ranked = rank(population, sense);
    let size = params.population_size;
    let mut next: Vec<CandidateSolution> = ranked[..params.elitism_count]
        .iter()
        .map(|&i| population[i].clone())
        .collect();

    'fill: while next.len() < size {
        let a = select(population, sense, params.selection, rng);
        let b = select(population, sense, params.selection, rng);
        let (c1, c2) = if rng.random::<f64>() < params.crossover_rate {
            crossover(&population[a].value, &population[b].value, encoding, params, rng)
        } else {
            (population[a].value.clone(), population[b].value.clone())
        };
        for mut child in [c1, c2] {
            if next.len() == size {
                break 'fill;
            }
            mutate(&mut child, encoding, params, rng);
            evaluator.repair(&mut child);
            match evaluator.evaluate(&child) {
                Some(f) => next.push(CandidateSolution::evaluated(child, f)),
                None => break 'fill,
            }
        }
    }

    let mut leftovers = ranked[params.elitism_count..].iter();
    while next.len() < size {
        let &i = leftovers.next().expect("enough individuals to refill");
        next.push(population[i].clone());
    }
    Ok(next)
}

/// Random initial population, repaired and evaluated. May come back short
/// when the budget is smaller than the population.
pub fn initial_population<R: Rng + ?Sized>(
    encoding: &Encoding,
    evaluator: &mut Evaluator<'_>,
    size: usize,
    rng: &mut R,
) -> Vec<CandidateSolution> {
    let mut population = Vec::with_capacity(size);
    for _ in 0..size {
        let mut g = encoding.sample(rng);
        evaluator.repair(&mut g);
        match evaluator.evaluate(&g) {
            Some(f) => population.push(CandidateSolution::evaluated(g, f)),
            None => break,
        }
    }
    population
}

pub fn run(
    problem: &Problem<'_>,
    params: &GaParams,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    problem.encoding.validate()?;
    params.validate()?;
    let mut evaluator = Evaluator::new(problem.objective, problem.sense, *budget)?;
    let mut rng = rng_stream(seed, SOLVER_STREAM);

    let mut population =
        initial_population(&problem.encoding, &mut evaluator, params.population_size, &mut rng);
    if population.len() == params.population_size {
        while !evaluator.is_stopped() {
            population = ga_step(&population, &problem.encoding, &mut evaluator, params, &mut rng)?;
            evaluator.end_iteration();
        }
    }
    let config = serde_json::to_value(params).expect("params serialize");
    evaluator.finish(ALGORITHM_ID, config, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Gene, Slot};

    fn onemax(g: &Genome) -> f64 {
        g.as_bits().unwrap().iter().filter(|&&b| b).count() as f64
    }

    #[test]
    fn clones_stay_clones_without_mutation() {
        let enc = Encoding::bitstring(12);
        let params = GaParams {
            population_size: 10,
            mutation_rate: Some(0.0),
            ..GaParams::default()
        };
        let mut ev = Evaluator::new(&onemax, ObjectiveSense::Maximize, Budget::evaluations(1000)).unwrap();
        let mut rng = rng_stream(5, 0);
        let g = enc.sample(&mut rng);
        let f = ev.evaluate(&g).unwrap();
        let pop = vec![CandidateSolution::evaluated(g, f); 10];
        let next = ga_step(&pop, &enc, &mut ev, &params, &mut rng).unwrap();
        assert_eq!(next, pop);
    }

    #[test]
    fn elites_are_carried_unchanged() {
        let enc = Encoding::bitstring(8);
        let params = GaParams {
            population_size: 6,
            elitism_count: 2,
            mutation_rate: Some(0.5),
            ..GaParams::default()
        };
        let mut ev = Evaluator::new(&onemax, ObjectiveSense::Maximize, Budget::evaluations(1000)).unwrap();
        let mut rng = rng_stream(11, 0);
        let pop = initial_population(&enc, &mut ev, 6, &mut rng);
        let ranked = rank(&pop, ObjectiveSense::Maximize);
        let next = ga_step(&pop, &enc, &mut ev, &params, &mut rng).unwrap();
        assert_eq!(next.len(), 6);
        assert_eq!(next[0], pop[ranked[0]]);
        assert_eq!(next[1], pop[ranked[1]]);
    }

    #[test]
    fn refill_when_budget_runs_out() {
        let enc = Encoding::bitstring(8);
        let params = GaParams {
            population_size: 10,
            ..GaParams::default()
        };
        let mut ev = Evaluator::new(&onemax, ObjectiveSense::Maximize, Budget::evaluations(13)).unwrap();
        let mut rng = rng_stream(2, 0);
        let pop = initial_population(&enc, &mut ev, 10, &mut rng);
        let next = ga_step(&pop, &enc, &mut ev, &params, &mut rng).unwrap();
        assert_eq!(next.len(), 10);
        assert_eq!(ev.evaluations(), 13);
    }

    #[test]
    fn onemax_reaches_optimum() {
        let enc = Encoding::bitstring(20);
        let problem = Problem::new(&onemax, enc, ObjectiveSense::Maximize);
        let params = GaParams {
            population_size: 50,
            ..GaParams::default()
        };
        let rec = run(&problem, &params, &Budget::evaluations(10_000), 1).unwrap();
        assert_eq!(rec.best_fitness, 20.0);
        assert_eq!(rec.best.value, Genome::Bits(vec![true; 20]));
        assert!(rec.evaluations <= 10_000);
        assert!(rec.history_is_monotone());
    }

    #[test]
    fn mismatched_population_rejected() {
        let enc = Encoding::bitstring(4);
        let params = GaParams {
            population_size: 2,
            elitism_count: 1,
            ..GaParams::default()
        };
        let mut ev = Evaluator::new(&onemax, ObjectiveSense::Maximize, Budget::evaluations(10)).unwrap();
        let pop = vec![
            CandidateSolution::evaluated(Genome::Bits(vec![true; 4]), 4.0),
            CandidateSolution::evaluated(Genome::Permutation(vec![0, 1, 2, 3]), 0.0),
        ];
        let err = ga_step(&pop, &enc, &mut ev, &params, &mut rng_stream(0, 0)).unwrap_err();
        assert!(matches!(err, RunError::EncodingMismatch { .. }));
    }

    #[test]
    fn mixed_array_structure_search() {
        // Integer slot picks a "layer count", real slot a "rate": the optimum
        // is layers = 3 and rate = 0.25.
        let slots = vec![
            Slot::Integer { lower: 1, upper: 6 },
            Slot::Real { lower: 0.0, upper: 1.0 },
            Slot::Integer { lower: 0, upper: 3 },
        ];
        let objective = |g: &Genome| {
            let genes = g.as_mixed().unwrap();
            let (Gene::Int(layers), Gene::Real(rate), Gene::Int(act)) = (genes[0], genes[1], genes[2]) else {
                return f64::NAN;
            };
            ((layers - 3) as f64).powi(2) + (rate - 0.25).powi(2) + if act == 2 { 0.0 } else { 1.0 }
        };
        let problem = Problem::new(&objective, Encoding::mixed(slots), ObjectiveSense::Minimize);
        let rec = run(&problem, &GaParams::default(), &Budget::evaluations(5_000), 4).unwrap();
        let genes = rec.best.value.as_mixed().unwrap();
        assert_eq!(genes[0], Gene::Int(3));
        assert_eq!(genes[2], Gene::Int(2));
        assert!(rec.best_fitness < 1e-3, "{}", rec.best_fitness);
    }

    #[test]
    fn params_validate() {
        assert!(GaParams::default().validate().is_ok());
        let p = GaParams {
            population_size: 1,
            elitism_count: 0,
            ..GaParams::default()
        };
        assert!(p.validate().is_err());
        let p = GaParams {
            population_size: 4,
            elitism_count: 4,
            ..GaParams::default()
        };
        assert!(p.validate().is_err());
        let parsed: GaParams =
            serde_json::from_str(r#"{"population_size": 40, "selection": {"type": "roulette"}}"#).unwrap();
        assert_eq!(parsed.population_size, 40);
        assert_eq!(parsed.selection, Selection::Roulette);
        assert_eq!(parsed.elitism_count, 2);
    }
}
