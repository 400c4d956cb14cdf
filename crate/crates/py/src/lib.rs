//! Python bindings for `natopt`.
//!
//! Build with `cargo build --release -p natopt-py --features extension-module`
//! and copy `libnatopt_py.so` to `natopt_py.so` somewhere on `sys.path`.

use std::cell::RefCell;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use natopt::algorithms::{aco_run, AcoParams};
use natopt::benchmarks::{
    hw_encoding, hw_grid_oracle, knapsack_brute_force, knapsack_dp, knapsack_ga_decode,
    knapsack_greedy_dantzig, knapsack_meet_in_middle, tsp_branch_and_bound, tsp_brute_force,
    HoltWintersObjective, KnapsackInstance, KnapsackObjective, Metric, TimeSeries, TspInstance,
};
use natopt::engine::{
    run_optimizer, AlgorithmConfig, Bounds, Budget, Encoding, ObjectiveSense, Problem, RealFn,
    RunRecord,
};
use natopt::harness::cli::HW_FOA_EVALUATIONS;
use natopt::harness::{bench_ga_vs_dp, gen_knapsack, gen_tsp, BenchConfig};
use natopt::taxonomy::{triz_map, PathPrefix, ProblemDescriptor, RuleTable, Taxonomy};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn metric(name: &str) -> PyResult<Metric> {
    match name.to_ascii_lowercase().as_str() {
        "euclidean" | "euc_2d" => Ok(Metric::Euclidean),
        "manhattan" | "man_2d" => Ok(Metric::Manhattan),
        other => Err(value_err(format!("unknown metric '{other}'"))),
    }
}

fn config(algo: &str, params_json: Option<&str>) -> PyResult<AlgorithmConfig> {
    match params_json {
        None => AlgorithmConfig::default_for(algo)
            .ok_or_else(|| value_err(format!("unknown algorithm '{algo}'"))),
        Some(p) => {
            let text = format!("{{\"algorithm\": {}, \"params\": {p}}}", serde_json::to_string(algo).unwrap());
            serde_json::from_str(&text).map_err(value_err)
        }
    }
}

fn record_dict<'py>(py: Python<'py>, rec: &RunRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("algorithm", &rec.algorithm)?;
    d.set_item("seed", rec.seed)?;
    d.set_item("best_fitness", rec.best_fitness)?;
    d.set_item("evaluations", rec.evaluations)?;
    d.set_item("iterations", rec.iterations)?;
    d.set_item("history", rec.history.clone())?;
    d.set_item("json", rec.to_json())?;
    Ok(d)
}

/// Ranked algorithm recommendations for a list of problem tags.
#[pyfunction]
#[pyo3(signature = (tags, top = 10))]
fn recommend<'py>(py: Python<'py>, tags: Vec<String>, top: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let taxonomy = Taxonomy::bundled();
    let descriptor = ProblemDescriptor::from_tags(&tags).map_err(value_err)?;
    let rec = triz_map(&taxonomy, &RuleTable::bundled(), &descriptor).map_err(value_err)?;
    rec.top(top)
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("name", &r.entry.name)?;
            d.set_item("score", r.score)?;
            d.set_item("path", r.matched_path.to_string())?;
            d.set_item("implemented", r.entry.implemented)?;
            d.set_item("rule", &r.rule_id)?;
            d.set_item("conceptual_goal", rec.conceptual_goal.to_string())?;
            Ok(d)
        })
        .collect()
}

/// Taxonomy entry by name or alias.
#[pyfunction]
fn lookup<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let taxonomy = Taxonomy::bundled();
    let e = taxonomy.lookup(name).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("name", &e.name)?;
    d.set_item("aliases", e.aliases.clone())?;
    d.set_item("paths", e.paths.iter().map(|p| p.to_string()).collect::<Vec<_>>())?;
    d.set_item("implemented", e.implemented)?;
    d.set_item("traditional", e.traditional.clone())?;
    Ok(d)
}

/// `(name, path)` pairs at or below a taxonomy path.
#[pyfunction]
#[pyo3(signature = (path = ""))]
fn taxonomy_ls(path: &str) -> PyResult<Vec<(String, String)>> {
    let taxonomy = Taxonomy::bundled();
    let prefix: PathPrefix = path.parse().map_err(value_err)?;
    Ok(taxonomy
        .children(&prefix)
        .map_err(value_err)?
        .into_iter()
        .map(|e| (e.name.clone(), e.path().to_string()))
        .collect())
}

/// Solves a 0-1 knapsack. Returns `(value, chosen item indices)`.
#[pyfunction]
#[pyo3(signature = (values, weights, capacity, algo = "dp", seed = 0, evals = 50_000))]
fn knapsack_solve(
    values: Vec<f64>,
    weights: Vec<u64>,
    capacity: u64,
    algo: &str,
    seed: u64,
    evals: u64,
) -> PyResult<(f64, Vec<usize>)> {
    if values.len() != weights.len() {
        return Err(value_err("values and weights differ in length"));
    }
    let pairs: Vec<(f64, u64)> = values.into_iter().zip(weights).collect();
    let inst = KnapsackInstance::from_pairs(&pairs, capacity).map_err(value_err)?;
    let sol = match algo {
        "dp" => knapsack_dp(&inst).map_err(runtime_err)?,
        "brute" => knapsack_brute_force(&inst).map_err(runtime_err)?,
        "mitm" => knapsack_meet_in_middle(&inst).map_err(runtime_err)?,
        "greedy" => knapsack_greedy_dantzig(&inst),
        "ga" => {
            let objective = KnapsackObjective::new(inst.clone());
            let problem = Problem::new(&objective, Encoding::bitstring(inst.len()), ObjectiveSense::Maximize);
            let cfg = config("ga", None)?;
            let rec = run_optimizer(&problem, &cfg, &Budget::evaluations(evals), seed).map_err(runtime_err)?;
            let bits = rec.best.value.as_bits().expect("GA on bitstrings");
            knapsack_ga_decode(bits, &inst).map_err(runtime_err)?
        }
        other => return Err(value_err(format!("unknown knapsack algorithm '{other}'"))),
    };
    Ok((sol.value, sol.items))
}

/// Solves a TSP over 2-D cities. Returns `(length, tour)`.
#[pyfunction]
#[pyo3(signature = (cities, algo = "bnb", metric_name = "euclidean", seed = 0, iterations = 200))]
fn tsp_solve(
    cities: Vec<(f64, f64)>,
    algo: &str,
    metric_name: &str,
    seed: u64,
    iterations: u64,
) -> PyResult<(f64, Vec<usize>)> {
    let coords = cities.into_iter().map(|(x, y)| [x, y]).collect();
    let inst = TspInstance::new(coords, metric(metric_name)?).map_err(value_err)?;
    match algo {
        "brute" => {
            let s = tsp_brute_force(&inst).map_err(runtime_err)?;
            Ok((s.length, s.tour))
        }
        "bnb" => {
            let s = tsp_branch_and_bound(&inst, None);
            Ok((s.length, s.tour))
        }
        "aco" => {
            let rec = aco_run(&inst, &AcoParams::default(), &Budget::iterations(iterations), seed)
                .map_err(runtime_err)?;
            Ok((rec.best_fitness, rec.best.value.as_permutation().expect("tour").to_vec()))
        }
        other => Err(value_err(format!("unknown tsp algorithm '{other}'"))),
    }
}

/// Fits multiplicative Holt-Winters smoothing parameters by SSE.
#[pyfunction]
#[pyo3(signature = (observations, season_length, algo = "foa", seed = 0, evals = None))]
fn hw_fit<'py>(
    py: Python<'py>,
    observations: Vec<f64>,
    season_length: usize,
    algo: &str,
    seed: u64,
    evals: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let series = TimeSeries::new(observations, season_length).map_err(value_err)?;
    let d = PyDict::new(py);
    match algo {
        "grid" => {
            let fit = hw_grid_oracle(&series);
            d.set_item("alpha", fit.params.alpha)?;
            d.set_item("beta", fit.params.beta)?;
            d.set_item("gamma", fit.params.gamma)?;
            d.set_item("sse", fit.sse)?;
            d.set_item("evaluations", fit.evaluations)?;
        }
        "foa" | "ba" | "ga" => {
            let budget = Budget::evaluations(evals.unwrap_or(HW_FOA_EVALUATIONS));
            let objective = HoltWintersObjective::new(series);
            let problem = Problem::new(&objective, hw_encoding(), ObjectiveSense::Minimize);
            let rec = run_optimizer(&problem, &config(algo, None)?, &budget, seed).map_err(runtime_err)?;
            let x = rec.best.value.as_real().expect("real genome");
            d.set_item("alpha", x[0])?;
            d.set_item("beta", x[1])?;
            d.set_item("gamma", x[2])?;
            d.set_item("sse", rec.best_fitness)?;
            d.set_item("evaluations", rec.evaluations)?;
        }
        other => return Err(value_err(format!("unknown fitting algorithm '{other}'"))),
    }
    Ok(d)
}

/// Minimizes a Python callable `f(list[float]) -> float` over a box.
#[pyfunction]
#[pyo3(signature = (func, bounds, algo = "foa", evals = 10_000, seed = 0, params_json = None))]
fn minimize<'py>(
    py: Python<'py>,
    func: Bound<'py, PyAny>,
    bounds: Vec<(f64, f64)>,
    algo: &str,
    evals: u64,
    seed: u64,
    params_json: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(algo, params_json)?;
    let encoding = Encoding::real_vector(bounds.into_iter().map(|(lo, hi)| Bounds::new(lo, hi)).collect());
    encoding.validate().map_err(value_err)?;
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let objective = RealFn(|x: &[f64]| {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        match func.call1((x.to_vec(),)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    });
    let problem = Problem::new(&objective, encoding, ObjectiveSense::Minimize);
    let rec = run_optimizer(&problem, &cfg, &Budget::evaluations(evals), seed).map_err(value_err)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let d = record_dict(py, &rec)?;
    d.set_item("x", rec.best.value.as_real().expect("real genome").to_vec())?;
    Ok(d)
}

/// Seeded knapsack instance in the plain-text file format.
#[pyfunction(name = "gen_knapsack")]
#[pyo3(signature = (n, seed = 0, tightness = 0.5))]
fn py_gen_knapsack(n: usize, seed: u64, tightness: f64) -> PyResult<String> {
    gen_knapsack(n, tightness, seed).map_err(value_err)
}

/// Seeded TSPLIB instance text.
#[pyfunction(name = "gen_tsp")]
#[pyo3(signature = (n, seed = 0, metric_name = "euclidean"))]
fn py_gen_tsp(n: usize, seed: u64, metric_name: &str) -> PyResult<String> {
    gen_tsp(n, metric(metric_name)?, seed).map_err(value_err)
}

/// GA vs DP timing report as CSV.
#[pyfunction(name = "bench_ga_vs_dp")]
#[pyo3(signature = (sizes, tightness = 0.5, reps = 3, seed = 0, evals = 50_000))]
fn py_bench(sizes: Vec<usize>, tightness: f64, reps: usize, seed: u64, evals: u64) -> PyResult<String> {
    let cfg = BenchConfig {
        sizes,
        tightness,
        repetitions: reps,
        seed,
        ga_evaluations: evals,
        ..BenchConfig::default()
    };
    Ok(bench_ga_vs_dp(&cfg).map_err(value_err)?.to_csv())
}

#[pymodule]
fn natopt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(recommend, m)?)?;
    m.add_function(wrap_pyfunction!(lookup, m)?)?;
    m.add_function(wrap_pyfunction!(taxonomy_ls, m)?)?;
    m.add_function(wrap_pyfunction!(knapsack_solve, m)?)?;
    m.add_function(wrap_pyfunction!(tsp_solve, m)?)?;
    m.add_function(wrap_pyfunction!(hw_fit, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(py_gen_knapsack, m)?)?;
    m.add_function(wrap_pyfunction!(py_gen_tsp, m)?)?;
    m.add_function(wrap_pyfunction!(py_bench, m)?)?;
    Ok(())
}
