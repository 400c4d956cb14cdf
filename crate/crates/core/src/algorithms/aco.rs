//! Ant colony optimization over permutations (closed tours).
//!
//! Each ant starts at a random city and repeatedly picks the next unvisited
//! city `j` with probability proportional to `tau(i, j)^alpha * eta(i, j)^beta`,
//! where `eta = 1 / distance`. After all ants finish, every edge evaporates
//! by `(1 - rho)` and the depositing tours add `Q / L` to each of their
//! edges. By default only the best tour found so far deposits.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmarks::{DistanceMatrix, TspInstance};
use crate::engine::{
    rng_stream, Budget, Encoding, Evaluator, Genome, ObjectiveSense, Problem, RunError, RunRecord,
    SOLVER_STREAM,
};

pub const ALGORITHM_ID: &str = "aco";

/// Distances at or below this are treated as this value when forming `eta`.
pub const MIN_DISTANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcoError {
    #[error("no unvisited city to move to")]
    NoCandidates,
    #[error("city index {0} is outside the pheromone matrix")]
    BadCity(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepositPolicy {
    /// Only the best tour so far deposits (global trail updating).
    GlobalBestOnly,
    AllAnts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AcoParams {
    /// Ants per iteration; `None` means one per city.
    pub ant_count: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    #[serde(rename = "Q", alias = "q")]
    pub q: f64,
    pub initial_pheromone: f64,
    /// Lower bound enforced on every pheromone entry.
    pub tau_min: f64,
    pub deposit_policy: DepositPolicy,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            ant_count: None,
            alpha: 1.0,
            beta: 2.0,
            rho: 0.5,
            q: 1.0,
            initial_pheromone: 1.0,
            tau_min: 0.01,
            deposit_policy: DepositPolicy::GlobalBestOnly,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |msg: &str| Err(RunError::InvalidParams(format!("aco: {msg}")));
        if self.ant_count == Some(0) {
            return bad("ant_count must be positive");
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return bad("alpha and beta must be >= 0");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho must lie in (0, 1)");
        }
        if !(self.q > 0.0) {
            return bad("Q must be positive");
        }
        if !(self.tau_min > 0.0 && self.initial_pheromone >= self.tau_min) {
            return bad("need 0 < tau_min <= initial_pheromone");
        }
        Ok(())
    }
}

/// Symmetric pheromone levels with a positive floor.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    n: usize,
    tau: Vec<f64>,
    floor: f64,
}

impl PheromoneMatrix {
    pub fn new(n: usize, initial: f64, floor: f64) -> Self {
        Self {
            n,
            tau: vec![initial.max(floor); n * n],
            floor,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`, clamped to the floor.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let v = value.max(self.floor);
        self.tau[i * self.n + j] = v;
        self.tau[j * self.n + i] = v;
    }

    pub fn min_off_diagonal(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    m = m.min(self.get(i, j));
                }
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Edge desirability `eta(i, j) = 1 / max(d(i, j), MIN_DISTANCE)`.
pub fn heuristic(distance: f64) -> f64 {
    1.0 / distance.max(MIN_DISTANCE)
}

/// Probability of moving from `current` to each city in `unvisited`, in the
/// same order. `distances` of `None` means a flat heuristic (`eta = 1`).
pub fn aco_transition_probability(
    current: usize,
    unvisited: &[usize],
    tau: &PheromoneMatrix,
    distances: Option<&DistanceMatrix>,
    params: &AcoParams,
) -> Result<Vec<f64>, AcoError> {
    if unvisited.is_empty() {
        return Err(AcoError::NoCandidates);
    }
    if let Some(&bad) = std::iter::once(&current)
        .chain(unvisited)
        .find(|&&c| c >= tau.len())
    {
        return Err(AcoError::BadCity(bad));
    }
    let mut weights = Vec::with_capacity(unvisited.len());
    transition_weights(current, unvisited, tau, distances, params, &mut weights);
    let total: f64 = weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        for w in weights.iter_mut() {
            *w /= total;
        }
    } else {
        let p = 1.0 / unvisited.len() as f64;
        weights.iter_mut().for_each(|w| *w = p);
    }
    Ok(weights)
}

fn transition_weights(
    current: usize,
    unvisited: &[usize],
    tau: &PheromoneMatrix,
    distances: Option<&DistanceMatrix>,
    params: &AcoParams,
    out: &mut Vec<f64>,
) {
    out.clear();
    for &j in unvisited {
        let eta = distances.map_or(1.0, |d| heuristic(d.get(current, j)));
        out.push(tau.get(current, j).powf(params.alpha) * eta.powf(params.beta));
    }
}

/// A completed tour and its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub cities: Vec<usize>,
    pub length: f64,
}

/// Evaporates every edge, then deposits `Q / L` along the depositing tours:
/// the shortest of `tours` under [`DepositPolicy::GlobalBestOnly`] (the
/// caller includes the best-so-far tour), or all of them under
/// [`DepositPolicy::AllAnts`]. The floor is enforced last.
pub fn aco_update_pheromone(tau: &mut PheromoneMatrix, tours: &[Tour], params: &AcoParams) {
    let n = tau.n;
    let keep = 1.0 - params.rho;
    for v in tau.tau.iter_mut() {
        *v *= keep;
    }
    let depositors: Vec<&Tour> = match params.deposit_policy {
        DepositPolicy::AllAnts => tours.iter().collect(),
        DepositPolicy::GlobalBestOnly => tours
            .iter()
            .reduce(|best, t| if t.length < best.length { t } else { best })
            .into_iter()
            .collect(),
    };
    for tour in depositors {
        if !(tour.length > 0.0) || tour.cities.len() < 2 {
            continue;
        }
        let amount = params.q / tour.length;
        let k = tour.cities.len();
        for e in 0..k {
            let (i, j) = (tour.cities[e], tour.cities[(e + 1) % k]);
            tau.tau[i * n + j] += amount;
            if i != j {
                tau.tau[j * n + i] += amount;
            }
        }
    }
    let floor = tau.floor;
    for v in tau.tau.iter_mut() {
        if *v < floor {
            *v = floor;
        }
    }
}

fn construct_tour<R: Rng + ?Sized>(
    n: usize,
    tau: &PheromoneMatrix,
    distances: Option<&DistanceMatrix>,
    params: &AcoParams,
    rng: &mut R,
    weights: &mut Vec<f64>,
) -> Vec<usize> {
    let mut unvisited: Vec<usize> = (0..n).collect();
    let start = unvisited.swap_remove(rng.random_range(0..n));
    // keep candidate order canonical so draws map to cities deterministically
    unvisited.sort_unstable();
    let mut tour = Vec::with_capacity(n);
    tour.push(start);
    while !unvisited.is_empty() {
        let current = *tour.last().unwrap();
        transition_weights(current, &unvisited, tau, distances, params, weights);
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 && total.is_finite() {
            let mut r = rng.random::<f64>() * total;
            let mut chosen = weights.len() - 1;
            for (k, w) in weights.iter().enumerate() {
                if r < *w {
                    chosen = k;
                    break;
                }
                r -= w;
            }
            chosen
        } else {
            rng.random_range(0..unvisited.len())
        };
        tour.push(unvisited.remove(pick));
    }
    tour
}

/// ACO on a generic permutation problem. The objective is minimized as the
/// tour cost; `problem.distances`, when given, supplies the heuristic.
pub fn run(
    problem: &Problem<'_>,
    params: &AcoParams,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    let n = match problem.encoding {
        Encoding::Permutation { length } => length,
        ref other => return Err(RunError::mismatch(ALGORITHM_ID, other.kind())),
    };
    problem.encoding.validate()?;
    params.validate()?;
    if problem.sense != ObjectiveSense::Minimize {
        return Err(RunError::InvalidParams(
            "aco: tour costs must be minimized".into(),
        ));
    }
    if let Some(d) = problem.distances {
        if d.len() != n {
            return Err(RunError::InvalidParams(format!(
                "aco: distance matrix is {}x{0}, encoding has {n} cities",
                d.len()
            )));
        }
    }
    let mut evaluator = Evaluator::new(problem.objective, problem.sense, *budget)?;
    let mut rng = rng_stream(seed, SOLVER_STREAM);
    let mut tau = PheromoneMatrix::new(n, params.initial_pheromone, params.tau_min);
    let ants = params.ant_count.unwrap_or(n);
    let mut weights = Vec::with_capacity(n);
    let mut best: Option<Tour> = None;

    'colony: while !evaluator.is_stopped() {
        let mut tours = Vec::with_capacity(ants + 1);
        for _ in 0..ants {
            let cities = construct_tour(n, &tau, problem.distances, params, &mut rng, &mut weights);
            let Some(length) = evaluator.evaluate(&Genome::Permutation(cities.clone())) else {
                break 'colony;
            };
            if best.as_ref().is_none_or(|b| length < b.length) {
                best = Some(Tour {
                    cities: cities.clone(),
                    length,
                });
            }
            tours.push(Tour { cities, length });
        }
        if params.deposit_policy == DepositPolicy::GlobalBestOnly {
            tours.clear();
            tours.extend(best.clone());
        }
        aco_update_pheromone(&mut tau, &tours, params);
        evaluator.end_iteration();
    }
    let config = serde_json::to_value(params).expect("params serialize");
    evaluator.finish(ALGORITHM_ID, config, seed)
}

/// ACO on a TSP instance with tour length as the objective.
pub fn aco_run(
    instance: &TspInstance,
    params: &AcoParams,
    budget: &Budget,
    seed: u64,
) -> Result<RunRecord, RunError> {
    let dist = instance.distance_matrix();
    let objective = |g: &Genome| match g.as_permutation() {
        Some(t) => dist.cycle_length(t),
        None => f64::NAN,
    };
    let problem = Problem {
        objective: &objective,
        encoding: Encoding::permutation(instance.len()),
        sense: ObjectiveSense::Minimize,
        distances: Some(&dist),
    };
    run(&problem, params, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Metric;
    use approx::assert_relative_eq;

    fn line_distances(xs: &[f64]) -> DistanceMatrix {
        DistanceMatrix::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
    }

    #[test]
    fn equal_tau_equal_distance_is_uniform() {
        let tau = PheromoneMatrix::new(3, 1.0, 1e-6);
        let d = line_distances(&[0.0, 1.0, -1.0]);
        let p = aco_transition_probability(0, &[1, 2], &tau, Some(&d), &AcoParams::default()).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn heuristic_only() {
        let tau = PheromoneMatrix::new(3, 1.0, 1e-6);
        let d = line_distances(&[0.0, 1.0, 2.0]);
        let params = AcoParams {
            alpha: 0.0,
            beta: 1.0,
            ..AcoParams::default()
        };
        let p = aco_transition_probability(0, &[1, 2], &tau, Some(&d), &params).unwrap();
        assert_relative_eq!(p[0], 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(p[1], 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn pheromone_only() {
        let mut tau = PheromoneMatrix::new(3, 1.0, 1e-6);
        tau.set(0, 1, 3.0);
        let d = line_distances(&[0.0, 5.0, 0.5]);
        let params = AcoParams {
            alpha: 1.0,
            beta: 0.0,
            ..AcoParams::default()
        };
        let p = aco_transition_probability(0, &[1, 2], &tau, Some(&d), &params).unwrap();
        assert_eq!(p, vec![0.75, 0.25]);
    }

    #[test]
    fn duplicate_cities_do_not_divide_by_zero() {
        let tau = PheromoneMatrix::new(3, 1.0, 1e-6);
        let d = line_distances(&[0.0, 0.0, 1.0]);
        let p = aco_transition_probability(0, &[1, 2], &tau, Some(&d), &AcoParams::default()).unwrap();
        assert!(p.iter().all(|x| x.is_finite()));
        assert!(p[0] > 0.999);
        assert!(aco_transition_probability(0, &[], &tau, Some(&d), &AcoParams::default()).is_err());
    }

    #[test]
    fn update_rules() {
        let params = AcoParams {
            rho: 0.5,
            q: 1.0,
            ..AcoParams::default()
        };
        let mut tau = PheromoneMatrix::new(4, 1.0, 1e-6);
        let best = Tour {
            cities: vec![0, 1, 2, 3],
            length: 2.0,
        };
        let worse = Tour {
            cities: vec![0, 2, 1, 3],
            length: 5.0,
        };
        aco_update_pheromone(&mut tau, &[worse.clone(), best.clone()], &params);
        // on the best tour: 0.5 + 1/2
        assert_eq!(tau.get(0, 1), 1.0);
        assert_eq!(tau.get(3, 0), 1.0);
        // only on the non-depositing tour: evaporation only
        assert_eq!(tau.get(0, 2), 0.5);
        assert!(tau.is_symmetric());

        let all = AcoParams {
            deposit_policy: DepositPolicy::AllAnts,
            ..params
        };
        let mut short = PheromoneMatrix::new(3, 1.0, 1e-6);
        let mut long = PheromoneMatrix::new(3, 1.0, 1e-6);
        aco_update_pheromone(&mut short, &[Tour { cities: vec![0, 1, 2], length: 1.0 }], &all);
        aco_update_pheromone(&mut long, &[Tour { cities: vec![0, 1, 2], length: 4.0 }], &all);
        assert_eq!(short.get(0, 1) - 0.5, 1.0);
        assert_eq!(long.get(0, 1) - 0.5, 0.25);
    }

    #[test]
    fn floor_holds_under_evaporation() {
        let params = AcoParams {
            rho: 0.9,
            tau_min: 1e-3,
            initial_pheromone: 1.0,
            ..AcoParams::default()
        };
        let mut tau = PheromoneMatrix::new(5, 1.0, params.tau_min);
        for _ in 0..50 {
            aco_update_pheromone(&mut tau, &[Tour { cities: vec![0, 1, 2, 3, 4], length: 1e6 }], &params);
        }
        assert!(tau.min_off_diagonal() >= 1e-3);
    }

    #[test]
    fn unit_square() {
        let inst = TspInstance::unit_square(Metric::Euclidean);
        let rec = aco_run(&inst, &AcoParams::default(), &Budget::iterations(50), 3).unwrap();
        assert_eq!(rec.best_fitness, 4.0);
    }

    #[test]
    fn triangle_any_tour_is_optimal() {
        let inst = TspInstance::new(vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]], Metric::Euclidean).unwrap();
        let rec = aco_run(&inst, &AcoParams::default(), &Budget::evaluations(1), 0).unwrap();
        assert_eq!(rec.best_fitness, 12.0);
    }

    #[test]
    fn rejects_real_encoding() {
        let f = |_: &Genome| 0.0;
        let problem = Problem::new(&f, Encoding::real_box(2, 0.0, 1.0), ObjectiveSense::Minimize);
        assert!(matches!(
            run(&problem, &AcoParams::default(), &Budget::evaluations(10), 0),
            Err(RunError::EncodingMismatch { .. })
        ));
    }

    #[test]
    fn params_parse_with_capital_q() {
        let p: AcoParams = serde_json::from_str(r#"{"Q": 2.5, "deposit_policy": "all_ants"}"#).unwrap();
        assert_eq!(p.q, 2.5);
        assert_eq!(p.deposit_policy, DepositPolicy::AllAnts);
        assert_eq!(p.rho, 0.5);
    }
}
