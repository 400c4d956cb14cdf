use proptest::prelude::*;

use natopt::algorithms::operators::{order_crossover, swap_mutation};
use natopt::algorithms::{
    aco_run, aco_transition_probability, aco_update_pheromone, ba, foa, ga, AcoParams, BaParams,
    FoaParams, GaParams, PheromoneMatrix, Tour,
};
use natopt::benchmarks::{
    hw_fit_sse, knapsack_dp, knapsack_ga_decode, knapsack_greedy_dantzig, synthetic_seasonal,
    HoltWintersParams, KnapsackInstance, KnapsackObjective, Metric, TestFunction, TspInstance,
};
use natopt::engine::{
    is_permutation, rng_stream, Budget, Encoding, ObjectiveSense, Problem, RealFn, RunRecord,
};
use natopt::harness::{TimingReport, TimingRow};

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn parents() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2usize..40).prop_flat_map(|n| (permutation(n), permutation(n)))
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    [-1e3..1e3f64, -1e3..1e3f64]
}

fn sphere_problem<'a>(objective: &'a RealFn<impl Fn(&[f64]) -> f64>, dims: usize) -> Problem<'a> {
    Problem::new(objective, TestFunction::Sphere.encoding(dims), ObjectiveSense::Minimize)
}

fn same_run(a: RunRecord, b: RunRecord) -> bool {
    a.without_timing() == b.without_timing()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_crossover_and_swap_keep_permutations((a, b) in parents(), seed in any::<u64>(), rate in 0.0..=1.0f64) {
        let mut rng = rng_stream(seed, 0);
        let (mut c, mut d) = order_crossover(&a, &b, &mut rng);
        prop_assert!(is_permutation(&c) && c.len() == a.len());
        prop_assert!(is_permutation(&d) && d.len() == a.len());
        swap_mutation(&mut c, rate, &mut rng);
        swap_mutation(&mut d, rate, &mut rng);
        prop_assert!(is_permutation(&c) && is_permutation(&d));
    }

    #[test]
    fn pheromone_floor_and_symmetry(
        n in 3usize..10,
        rounds in prop::collection::vec((any::<u64>(), 0.1..100.0f64), 1..40),
        rho in 0.01..=1.0f64,
        tau_min in 1e-6..0.5f64,
    ) {
        let params = AcoParams { rho, tau_min, ..AcoParams::default() };
        let mut tau = PheromoneMatrix::new(n, 1.0, tau_min);
        for (seed, length) in rounds {
            let mut cities: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            cities.shuffle(&mut rng_stream(seed, 0));
            aco_update_pheromone(&mut tau, &[Tour { cities, length }], &params);
            prop_assert!(tau.min_off_diagonal() >= tau_min);
            prop_assert!(tau.is_symmetric());
        }
    }

    #[test]
    fn transition_probabilities_sum_to_one(
        n in 3usize..15,
        seed in any::<u64>(),
        levels in prop::collection::vec(1e-3..10.0f64, 14),
        alpha in 0.1..3.0f64,
        beta in 0.0..5.0f64,
        bump in 1.01..10.0f64,
    ) {
        let params = AcoParams { alpha, beta, ..AcoParams::default() };
        let inst = TspInstance::random_uniform(n, seed, Metric::Euclidean).unwrap();
        let dist = inst.distance_matrix();
        let mut tau = PheromoneMatrix::new(n, 1.0, 1e-3);
        for j in 1..n {
            tau.set(0, j, levels[j - 1]);
        }
        let unvisited: Vec<usize> = (1..n).collect();
        let p = aco_transition_probability(0, &unvisited, &tau, Some(&dist), &params).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        tau.set(0, 1, levels[0] * bump);
        let q = aco_transition_probability(0, &unvisited, &tau, Some(&dist), &params).unwrap();
        prop_assert!(q[0] > p[0] || p[0] == 1.0);
    }

    #[test]
    fn metrics_are_symmetric_and_satisfy_triangle(a in point(), b in point(), c in point()) {
        for m in [Metric::Euclidean, Metric::Manhattan] {
            prop_assert_eq!(m.distance(a, b), m.distance(b, a));
            prop_assert_eq!(m.distance(a, a), 0.0);
            let slack = 1e-12 * (m.distance(a, b) + m.distance(b, c)).max(1.0);
            prop_assert!(m.distance(a, c) <= m.distance(a, b) + m.distance(b, c) + slack);
        }
    }

    #[test]
    fn holt_winters_sse_scales_quadratically(
        seed in any::<u64>(),
        m in 2usize..13,
        seasons in 2usize..6,
        alpha in 0.0..=1.0f64,
        beta in 0.0..=1.0f64,
        gamma in 0.0..=1.0f64,
        c in 1e-3..1e3f64,
    ) {
        let series = synthetic_seasonal(seed, m, seasons).unwrap();
        let params = HoltWintersParams::new(alpha, beta, gamma).unwrap();
        let base = hw_fit_sse(&series, &params).unwrap();
        let scaled = hw_fit_sse(&series.scaled(c).unwrap(), &params).unwrap() / (c * c);
        prop_assert!((scaled - base).abs() <= 1e-9 * base.max(f64::MIN_POSITIVE), "{} vs {}", scaled, base);
    }

    #[test]
    fn repair_decoding_is_feasible_and_bounded(
        n in 1usize..25,
        seed in any::<u64>(),
        tightness in 0.05..=1.0f64,
        bits in prop::collection::vec(any::<bool>(), 25),
    ) {
        let inst = KnapsackInstance::random_uniform(n, tightness, seed);
        let sol = knapsack_ga_decode(&bits[..n], &inst).unwrap();
        prop_assert!(inst.is_feasible(&sol.items));
        prop_assert!(sol.value <= knapsack_dp(&inst).unwrap().value);
    }

    #[test]
    fn greedy_bounds(n in 1usize..40, seed in any::<u64>(), tightness in 0.05..=1.0f64) {
        let inst = KnapsackInstance::random_uniform(n, tightness, seed);
        let greedy = knapsack_greedy_dantzig(&inst).value;
        let dp = knapsack_dp(&inst).unwrap().value;
        let vmax = inst.items.iter().map(|i| i.value).fold(0.0, f64::max);
        prop_assert!(greedy <= dp);
        prop_assert!(dp <= greedy + vmax);
    }

    #[test]
    fn timing_report_json_round_trips(
        rows in prop::collection::vec((1usize..10_000, any::<f64>(), -1e9..1e9f64, prop::option::of(0.0..1e9f64)), 1..8),
    ) {
        let mut report = TimingReport {
            rows: rows
                .into_iter()
                .map(|(n, ms, best, opt)| TimingRow {
                    n,
                    parameter: None,
                    algorithm: "ga".into(),
                    median_ms: if ms.is_finite() { ms.abs() } else { 1.0 },
                    best_value: best,
                    optimum: opt,
                    ratio: opt.map(|o| if o > 0.0 { best / o } else { 1.0 }),
                })
                .collect(),
            ..Default::default()
        };
        report.compute_slopes();
        let text = report.to_json();
        prop_assert_eq!(TimingReport::from_json(&text).unwrap().to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solvers_are_deterministic_and_monotone(seed in any::<u64>(), evals in 1u64..3_000) {
        let budget = Budget::evaluations(evals);
        let objective = RealFn(|x: &[f64]| TestFunction::Sphere.value(x));
        let problem = sphere_problem(&objective, 3);
        let runs: [&dyn Fn() -> RunRecord; 3] = [
            &|| foa::run(&problem, &FoaParams::default(), &budget, seed).unwrap(),
            &|| ba::run(&problem, &BaParams::default(), &budget, seed).unwrap(),
            &|| ga::run(&problem, &GaParams::default(), &budget, seed).unwrap(),
        ];
        for run in runs {
            let rec = run();
            prop_assert!(rec.evaluations <= evals);
            prop_assert!(rec.history_is_monotone());
            prop_assert!(same_run(rec, run()));
        }

        let knap = KnapsackObjective::new(KnapsackInstance::random_uniform(20, 0.5, seed));
        let kp = Problem::new(&knap, Encoding::bitstring(20), ObjectiveSense::Maximize);
        let a = ga::run(&kp, &GaParams::default(), &budget, seed).unwrap();
        prop_assert!(a.history_is_monotone());
        prop_assert!(same_run(a, ga::run(&kp, &GaParams::default(), &budget, seed).unwrap()));

        let tsp = TspInstance::random_uniform(7, seed, Metric::Manhattan).unwrap();
        let a = aco_run(&tsp, &AcoParams::default(), &budget, seed).unwrap();
        prop_assert!(a.evaluations <= evals);
        prop_assert!(a.history_is_monotone());
        prop_assert!(is_permutation(a.best.value.as_permutation().unwrap()));
        prop_assert!(same_run(a, aco_run(&tsp, &AcoParams::default(), &budget, seed).unwrap()));
    }
}
