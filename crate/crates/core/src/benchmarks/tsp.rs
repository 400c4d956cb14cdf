//! Symmetric TSP instances and two exact solvers: brute-force enumeration and
//! depth-first branch-and-bound.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::engine::{is_permutation, rng_stream, GENERATOR_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
}

impl Metric {
    pub fn distance(self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let dx = a[0] - b[0];
        let dy = a[1] - b[1];
        match self {
            Metric::Euclidean => dx.hypot(dy),
            Metric::Manhattan => dx.abs() + dy.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub cities: Vec<[f64; 2]>,
    pub metric: Metric,
}

/// Dense symmetric distance matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Closed-cycle length of `tour`, including the return edge. The tour is
    /// not validated.
    pub fn cycle_length(&self, tour: &[usize]) -> f64 {
        if tour.is_empty() {
            return 0.0;
        }
        let mut total = 0.0;
        for w in tour.windows(2) {
            total += self.get(w[0], w[1]);
        }
        total + self.get(tour[tour.len() - 1], tour[0])
    }
}

impl TspInstance {
    pub fn new(cities: Vec<[f64; 2]>, metric: Metric) -> Result<Self, BenchmarkError> {
        if cities.len() < 3 {
            return Err(BenchmarkError::InvalidInstance(format!(
                "a TSP instance needs at least 3 cities, got {}",
                cities.len()
            )));
        }
        if cities.iter().flatten().any(|c| !c.is_finite()) {
            return Err(BenchmarkError::InvalidInstance("non-finite coordinate".into()));
        }
        Ok(Self { cities, metric })
    }

    /// The four corners of the unit square, listed in perimeter order.
    pub fn unit_square(metric: Metric) -> Self {
        Self {
            cities: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            metric,
        }
    }

    /// `n` cities uniform in the unit square.
    pub fn random_uniform(n: usize, seed: u64, metric: Metric) -> Result<Self, BenchmarkError> {
        let mut rng = rng_stream(seed, GENERATOR_STREAM);
        let cities = (0..n)
            .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        Self::new(cities, metric)
    }

    pub fn len(&self) -> usize {
        self.cities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.distance(self.cities[i], self.cities[j])
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        DistanceMatrix::from_fn(self.len(), |i, j| self.distance(i, j))
    }
}

/// Closed-cycle length of a tour visiting every city once.
pub fn tour_length(tour: &[usize], instance: &TspInstance) -> Result<f64, BenchmarkError> {
    if tour.len() != instance.len() || !is_permutation(tour) {
        return Err(BenchmarkError::InvalidTour);
    }
    let mut total = 0.0;
    for k in 0..tour.len() {
        total += instance.distance(tour[k], tour[(k + 1) % tour.len()]);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The search proved optimality.
    Complete,
    /// The time limit cut the search short; the tour is the best found.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspSolution {
    pub length: f64,
    pub tour: Vec<usize>,
    pub status: SearchStatus,
}

pub const BRUTE_FORCE_MAX_CITIES: usize = 10;

/// Enumerates every tour starting at city 0. Ties keep the lexicographically
/// first tour.
pub fn tsp_brute_force(instance: &TspInstance) -> Result<TspSolution, BenchmarkError> {
    let n = instance.len();
    if n > BRUTE_FORCE_MAX_CITIES {
        return Err(BenchmarkError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_CITIES,
        });
    }
    let dist = instance.distance_matrix();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut tour = Vec::with_capacity(n);
    let mut best_len = f64::INFINITY;
    let mut best_tour = Vec::new();
    loop {
        tour.clear();
        tour.push(0);
        tour.extend_from_slice(&rest);
        let len = dist.cycle_length(&tour);
        if len < best_len {
            best_len = len;
            best_tour = tour.clone();
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(TspSolution {
        length: best_len,
        tour: best_tour,
        status: SearchStatus::Complete,
    })
}

/// Advances to the next lexicographic permutation; false after the last one.
fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

pub const BRANCH_AND_BOUND_SOFT_CAP: usize = 40;

/// Relative slack below the incumbent that a bound must reach before a
/// branch is explored.
const PRUNE_TOLERANCE: f64 = 1e-12;

struct BranchAndBound<'a> {
    dist: &'a DistanceMatrix,
    /// Every city's neighbours, nearest first.
    neighbours: Vec<Vec<usize>>,
    visited: Vec<bool>,
    path: Vec<usize>,
    best_len: f64,
    best_tour: Vec<usize>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl BranchAndBound<'_> {
    /// Cheapest-two-edges bound on the remaining closing path from the last
    /// path city through every unvisited city back to city 0. Each unvisited
    /// city contributes its two cheapest edges to cities that can still be
    /// adjacent to it; the path ends contribute one each; the sum counts
    /// every remaining edge twice.
    fn remaining_bound(&self, last: usize) -> f64 {
        let start = self.path[0];
        let allowed = |u: usize, v: usize| -> bool {
            v != u && (!self.visited[v] || v == start || v == last)
        };
        let mut twice = 0.0;
        for u in 0..self.dist.len() {
            if self.visited[u] {
                continue;
            }
            let mut found = 0;
            for &v in &self.neighbours[u] {
                if allowed(u, v) {
                    twice += self.dist.get(u, v);
                    found += 1;
                    if found == 2 {
                        break;
                    }
                }
            }
        }
        for end in [start, last] {
            if let Some(&v) = self.neighbours[end].iter().find(|&&v| !self.visited[v]) {
                twice += self.dist.get(end, v);
            }
        }
        twice / 2.0
    }

    fn search(&mut self, path_len: f64) {
        self.nodes += 1;
        if self.nodes % 4096 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let n = self.dist.len();
        let last = *self.path.last().expect("path starts at city 0");
        if self.path.len() == n {
            let total = path_len + self.dist.get(last, self.path[0]);
            if total < self.best_len {
                self.best_len = total;
                self.best_tour = self.path.clone();
            }
            return;
        }
        if path_len + self.remaining_bound(last) >= self.best_len * (1.0 - PRUNE_TOLERANCE) {
            return;
        }
        let candidates: Vec<usize> = self.neighbours[last]
            .iter()
            .copied()
            .filter(|&v| !self.visited[v])
            .collect();
        for v in candidates {
            let next_len = path_len + self.dist.get(last, v);
            if next_len >= self.best_len {
                continue;
            }
            self.visited[v] = true;
            self.path.push(v);
            self.search(next_len);
            self.path.pop();
            self.visited[v] = false;
            if self.timed_out {
                return;
            }
        }
    }
}

/// Nearest-neighbour tour from city 0 improved by 2-opt until no move helps.
pub fn nearest_neighbour_two_opt(dist: &DistanceMatrix) -> Vec<usize> {
    let n = dist.len();
    let mut visited = vec![false; n];
    let mut tour = vec![0];
    visited[0] = true;
    for _ in 1..n {
        let last = *tour.last().unwrap();
        let next = (0..n)
            .filter(|&v| !visited[v])
            .min_by(|&a, &b| dist.get(last, a).total_cmp(&dist.get(last, b)))
            .unwrap();
        visited[next] = true;
        tour.push(next);
    }
    two_opt(&mut tour, dist);
    tour
}

/// In-place 2-opt local search (first improvement).
pub fn two_opt(tour: &mut [usize], dist: &DistanceMatrix) {
    let n = tour.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (tour[i], tour[i + 1]);
                let (c, d) = (tour[j], tour[(j + 1) % n]);
                let delta = dist.get(a, c) + dist.get(b, d) - dist.get(a, b) - dist.get(c, d);
                if delta < -1e-12 {
                    tour[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// Exact branch-and-bound with a cheapest-two-edges lower bound, seeded with
/// a 2-opt incumbent. With a time limit, an interrupted search returns the
/// incumbent with [`SearchStatus::Incomplete`].
///
/// Branches whose bound comes within a relative 1e-12 of the incumbent are
/// pruned, so the result is optimal to that tolerance.
pub fn tsp_branch_and_bound(instance: &TspInstance, time_limit: Option<Duration>) -> TspSolution {
    let dist = instance.distance_matrix();
    let n = dist.len();
    let incumbent = nearest_neighbour_two_opt(&dist);
    let neighbours = (0..n)
        .map(|u| {
            let mut vs: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            vs.sort_by(|&a, &b| dist.get(u, a).total_cmp(&dist.get(u, b)).then(a.cmp(&b)));
            vs
        })
        .collect();
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut bb = BranchAndBound {
        dist: &dist,
        neighbours,
        visited,
        path: vec![0],
        best_len: dist.cycle_length(&incumbent),
        best_tour: incumbent,
        deadline: time_limit.map(|t| Instant::now() + t),
        nodes: 0,
        timed_out: false,
    };
    bb.search(0.0);
    TspSolution {
        length: bb.best_len,
        tour: bb.best_tour,
        status: if bb.timed_out {
            SearchStatus::Incomplete
        } else {
            SearchStatus::Complete
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_lengths() {
        let e = TspInstance::unit_square(Metric::Euclidean);
        let m = TspInstance::unit_square(Metric::Manhattan);
        assert_eq!(tour_length(&[0, 1, 2, 3], &e).unwrap(), 4.0);
        assert_eq!(tour_length(&[0, 1, 2, 3], &m).unwrap(), 4.0);
        // (0,0) -> (1,1) -> (0,1) -> (1,0): two diagonals, two sides
        let crossing = tour_length(&[0, 2, 3, 1], &e).unwrap();
        assert_relative_eq!(crossing, 2.0 + 2.0 * 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn invalid_tours() {
        let e = TspInstance::unit_square(Metric::Euclidean);
        assert_eq!(tour_length(&[0, 1, 2], &e), Err(BenchmarkError::InvalidTour));
        assert_eq!(tour_length(&[0, 1, 1, 3], &e), Err(BenchmarkError::InvalidTour));
    }

    #[test]
    fn exact_solvers_on_square() {
        let e = TspInstance::unit_square(Metric::Euclidean);
        assert_eq!(tsp_brute_force(&e).unwrap().length, 4.0);
        let bb = tsp_branch_and_bound(&e, None);
        assert_eq!(bb.length, 4.0);
        assert_eq!(bb.status, SearchStatus::Complete);
    }

    #[test]
    fn triangle_has_one_cycle() {
        let t = TspInstance::new(vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]], Metric::Euclidean).unwrap();
        assert_eq!(tsp_brute_force(&t).unwrap().length, 12.0);
        assert_eq!(tsp_branch_and_bound(&t, None).length, 12.0);
    }

    #[test]
    fn too_large_for_brute_force() {
        let inst = TspInstance::random_uniform(11, 1, Metric::Euclidean).unwrap();
        assert!(matches!(tsp_brute_force(&inst), Err(BenchmarkError::TooLarge { .. })));
    }

    #[test]
    fn n8_seed7_oracles_agree() {
        let inst = TspInstance::random_uniform(8, 7, Metric::Euclidean).unwrap();
        let brute = tsp_brute_force(&inst).unwrap();
        let bb = tsp_branch_and_bound(&inst, None);
        assert_relative_eq!(brute.length, bb.length, max_relative = 1e-9);
        assert_relative_eq!(tour_length(&bb.tour, &inst).unwrap(), bb.length, max_relative = 1e-12);
    }

    #[test]
    fn permutation_enumeration_counts() {
        let mut xs = vec![1, 2, 3, 4];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(xs, vec![4, 3, 2, 1]);
    }

    #[test]
    fn too_few_cities() {
        assert!(TspInstance::new(vec![[0.0, 0.0], [1.0, 1.0]], Metric::Euclidean).is_err());
    }
}
