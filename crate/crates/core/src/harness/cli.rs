//! Command-line front end.
//!
//! ```text
//! natopt recommend --tags route-finding,combinatorial-permutation,team-search
//! natopt taxonomy ls [PATH]
//! natopt solve knapsack --algo dp|brute|mitm|greedy|ga --in FILE
//! natopt solve tsp --algo brute|bnb|aco|ga --in FILE
//! natopt fit hw --in SERIES.csv --algo foa|grid [--season M]
//! natopt bench ga-vs-dp --sizes 100,200,400,800 [--tightness 0.5] [--reps 3]
//! natopt gen knapsack|tsp|series --n N
//! natopt experiment --spec SPEC.json
//! ```
//!
//! `--seed` is accepted by every command. Exit status is 0 on success, 2 on
//! a usage error and 1 on a runtime error. Commands that write files and
//! were not given `--out` use the directory in `NATOPT_OUT_DIR` when set,
//! and stdout otherwise.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::bench::{bench_ga_vs_dp, BenchConfig, DEFAULT_GA_EVALUATIONS};
use super::experiment::{run_experiment, ExperimentSpec};
use super::generate::{gen_knapsack, gen_series, gen_tsp};
use super::report::ReportFormat;
use super::HarnessError;
use crate::algorithms::{aco, foa, ga, AcoParams, FoaParams, GaParams};
use crate::benchmarks::io::{parse_knapsack, parse_tsplib, read_series};
use crate::benchmarks::{
    hw_encoding, hw_grid_oracle, knapsack_brute_force, knapsack_dp, knapsack_ga_decode,
    knapsack_greedy_dantzig, knapsack_meet_in_middle, tsp_branch_and_bound, tsp_brute_force,
    HoltWintersObjective, KnapsackObjective, Metric, SearchStatus,
};
use crate::engine::{Budget, Encoding, Genome, ObjectiveSense, Problem, RunRecord};
use crate::taxonomy::{load_taxonomy, triz_map, PathPrefix, ProblemDescriptor, RuleTable, Taxonomy};

pub const OUT_DIR_ENV: &str = "NATOPT_OUT_DIR";

/// Default FOA budget for `fit hw`: 20% of the grid oracle's 21^3 evaluations.
pub const HW_FOA_EVALUATIONS: u64 = 9261 / 5;

/// Default ACO budget for `solve tsp`, in colonies.
pub const ACO_ITERATIONS: u64 = 200;

#[derive(Debug, Parser)]
#[command(name = "natopt", version, about = "Nature-inspired optimization toolkit")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recommend algorithms for a tagged problem description.
    Recommend(RecommendArgs),
    /// Browse the algorithm taxonomy.
    #[command(subcommand)]
    Taxonomy(TaxonomyCommand),
    /// Solve an instance file.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Fit model parameters.
    #[command(subcommand)]
    Fit(FitCommand),
    /// Timing benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Generate seeded instance files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a batch experiment described by a JSON spec.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    /// Comma-separated tags: goals, one modality, optional cooperation and data regime.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub tags: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Rule table file instead of the bundled one.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Taxonomy file instead of the bundled one.
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    /// Print the recommendation as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum TaxonomyCommand {
    /// List algorithms at or below a path such as `Biology/ResourceSeeking`.
    Ls {
        path: Option<String>,
        #[arg(long)]
        taxonomy: Option<PathBuf>,
    },
    /// Show one algorithm by name or alias.
    Show {
        name: String,
        #[arg(long)]
        taxonomy: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KnapsackAlgo {
    Dp,
    Brute,
    Mitm,
    Greedy,
    Ga,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TspAlgo {
    Brute,
    Bnb,
    Aco,
    Ga,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HwAlgo {
    Foa,
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Manhattan,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Manhattan => Metric::Manhattan,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    Knapsack {
        #[arg(long)]
        algo: KnapsackAlgo,
        #[arg(long = "in")]
        input: PathBuf,
        /// Evaluation budget for GA.
        #[arg(long, default_value_t = DEFAULT_GA_EVALUATIONS)]
        evals: u64,
        /// Write the run record JSON here (metaheuristics only).
        #[arg(long)]
        record: Option<PathBuf>,
    },
    Tsp {
        #[arg(long)]
        algo: TspAlgo,
        #[arg(long = "in")]
        input: PathBuf,
        /// Colony count for ACO.
        #[arg(long, default_value_t = ACO_ITERATIONS)]
        iterations: u64,
        /// Evaluation budget for GA.
        #[arg(long, default_value_t = DEFAULT_GA_EVALUATIONS)]
        evals: u64,
        /// Time limit for branch and bound, in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        record: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FitCommand {
    /// Multiplicative Holt-Winters smoothing parameters by SSE.
    Hw {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        algo: HwAlgo,
        /// Season length; read from the sidecar JSON when omitted.
        #[arg(long)]
        season: Option<usize>,
        #[arg(long, default_value_t = HW_FOA_EVALUATIONS)]
        evals: u64,
        #[arg(long)]
        record: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Median wall time of knapsack DP and GA over a size sweep.
    GaVsDp {
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        tightness: f64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_GA_EVALUATIONS)]
        evals: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    Knapsack {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        tightness: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Tsp {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
        metric: MetricArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthetic seasonal series CSV plus its sidecar JSON.
    Series {
        #[arg(long, default_value_t = 12)]
        season: usize,
        #[arg(long, default_value_t = 10)]
        seasons: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match execute(&cli, out_dir.as_deref(), out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), HarnessError> {
    out.write_all(text.as_bytes())
        .map_err(|e| HarnessError::Io(format!("stdout: {e}")))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        write_out($out, &format!("{}\n", format_args!($($arg)*)))
    };
}

/// Destination for a generated file: `--out`, else `NATOPT_OUT_DIR/default_name`,
/// else stdout (`None`).
fn destination(explicit: Option<&Path>, out_dir: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| out_dir.map(|d| d.join(default_name)))
}

fn emit(
    text: &str,
    dest: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Option<PathBuf>, HarnessError> {
    match dest {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
            }
            std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
            Ok(Some(path))
        }
        None => {
            write_out(out, text)?;
            Ok(None)
        }
    }
}

fn save_record(record: &RunRecord, path: Option<&Path>) -> Result<(), HarnessError> {
    if let Some(path) = path {
        std::fs::write(path, record.to_json() + "\n").map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn taxonomy_from(path: Option<&Path>) -> Result<Taxonomy, HarnessError> {
    Ok(match path {
        Some(p) => load_taxonomy(p)?,
        None => Taxonomy::bundled(),
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn execute(cli: &Cli, out_dir: Option<&Path>, out: &mut dyn Write) -> Result<(), HarnessError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Recommend(args) => {
            let taxonomy = taxonomy_from(args.taxonomy.as_deref())?;
            let rules = match &args.rules {
                Some(p) => RuleTable::load(p)?,
                None => RuleTable::bundled(),
            };
            let descriptor = ProblemDescriptor::from_tags(&args.tags)?;
            let rec = triz_map(&taxonomy, &rules, &descriptor)?;
            if args.json {
                let mut text = serde_json::to_string_pretty(&rec).expect("recommendation serializes");
                text.push('\n');
                return write_out(out, &text);
            }
            say!(out, "conceptual goal: {}", rec.conceptual_goal)?;
            for (i, r) in rec.top(args.top).iter().enumerate() {
                let mark = if r.entry.implemented { " [implemented]" } else { "" };
                say!(
                    out,
                    "{:>2}. {:.3}  {}{mark}  ({}; {})",
                    i + 1,
                    r.score,
                    r.entry.name,
                    r.matched_path,
                    r.rationale
                )?;
            }
            Ok(())
        }
        Command::Taxonomy(TaxonomyCommand::Ls { path, taxonomy }) => {
            let taxonomy = taxonomy_from(taxonomy.as_deref())?;
            let prefix: PathPrefix = path.as_deref().unwrap_or("").parse()?;
            for e in taxonomy.children(&prefix)? {
                let mark = if e.implemented { " *" } else { "" };
                say!(out, "{}{mark}\t{}", e.name, e.path())?;
            }
            Ok(())
        }
        Command::Taxonomy(TaxonomyCommand::Show { name, taxonomy }) => {
            let taxonomy = taxonomy_from(taxonomy.as_deref())?;
            let e = taxonomy.lookup(name)?;
            say!(out, "name {}", e.name)?;
            if !e.aliases.is_empty() {
                say!(out, "aliases {}", e.aliases.join(", "))?;
            }
            for p in &e.paths {
                say!(out, "path {p}")?;
            }
            say!(out, "implemented {}", e.implemented)?;
            if let Some(t) = &e.traditional {
                say!(out, "traditional {t}")?;
            }
            if let Some(n) = &e.note {
                say!(out, "note {n}")?;
            }
            Ok(())
        }
        Command::Solve(SolveCommand::Knapsack {
            algo,
            input,
            evals,
            record,
        }) => {
            let instance = parse_knapsack(&read_text(input)?)?;
            let (name, solution) = match algo {
                KnapsackAlgo::Dp => ("dp", knapsack_dp(&instance)?),
                KnapsackAlgo::Brute => ("brute", knapsack_brute_force(&instance)?),
                KnapsackAlgo::Mitm => ("mitm", knapsack_meet_in_middle(&instance)?),
                KnapsackAlgo::Greedy => ("greedy", knapsack_greedy_dantzig(&instance)),
                KnapsackAlgo::Ga => {
                    let objective = KnapsackObjective::new(instance.clone());
                    let problem = Problem::new(
                        &objective,
                        Encoding::bitstring(instance.len()),
                        ObjectiveSense::Maximize,
                    );
                    let rec = ga::run(&problem, &GaParams::default(), &Budget::evaluations(*evals), seed)?;
                    save_record(&rec, record.as_deref())?;
                    let bits = rec.best.value.as_bits().expect("GA on bitstrings");
                    ("ga", knapsack_ga_decode(bits, &instance)?)
                }
            };
            say!(out, "algorithm {name}")?;
            say!(out, "value {:?}", solution.value)?;
            say!(out, "weight {}", instance.total_weight(&solution.items))?;
            say!(out, "capacity {}", instance.capacity)?;
            say!(out, "items {}", join(&solution.items))
        }
        Command::Solve(SolveCommand::Tsp {
            algo,
            input,
            iterations,
            evals,
            time_limit,
            record,
        }) => {
            let instance = parse_tsplib(&read_text(input)?)?;
            let (name, length, tour, status) = match algo {
                TspAlgo::Brute => {
                    let s = tsp_brute_force(&instance)?;
                    ("brute", s.length, s.tour, s.status)
                }
                TspAlgo::Bnb => {
                    let limit = time_limit
                        .map(|s| {
                            std::time::Duration::try_from_secs_f64(s).map_err(|_| {
                                HarnessError::Invalid("time limit must be a non-negative number".into())
                            })
                        })
                        .transpose()?;
                    let s = tsp_branch_and_bound(&instance, limit);
                    ("bnb", s.length, s.tour, s.status)
                }
                TspAlgo::Aco => {
                    let rec = aco::aco_run(&instance, &AcoParams::default(), &Budget::iterations(*iterations), seed)?;
                    save_record(&rec, record.as_deref())?;
                    let tour = rec.best.value.as_permutation().expect("tour").to_vec();
                    ("aco", rec.best_fitness, tour, SearchStatus::Incomplete)
                }
                TspAlgo::Ga => {
                    let dist = instance.distance_matrix();
                    let objective = |g: &Genome| match g.as_permutation() {
                        Some(t) => dist.cycle_length(t),
                        None => f64::NAN,
                    };
                    let problem = Problem::new(
                        &objective,
                        Encoding::permutation(instance.len()),
                        ObjectiveSense::Minimize,
                    );
                    let rec = ga::run(&problem, &GaParams::default(), &Budget::evaluations(*evals), seed)?;
                    save_record(&rec, record.as_deref())?;
                    let tour = rec.best.value.as_permutation().expect("tour").to_vec();
                    ("ga", rec.best_fitness, tour, SearchStatus::Incomplete)
                }
            };
            say!(out, "algorithm {name}")?;
            say!(out, "length {length:?}")?;
            say!(out, "tour {}", join(&tour))?;
            let status = match status {
                SearchStatus::Complete => "optimal",
                SearchStatus::Incomplete => "heuristic",
            };
            say!(out, "status {status}")
        }
        Command::Fit(FitCommand::Hw {
            input,
            algo,
            season,
            evals,
            record,
        }) => {
            let series = read_series(input, *season)?;
            match algo {
                HwAlgo::Grid => {
                    let fit = hw_grid_oracle(&series);
                    say!(out, "algorithm grid")?;
                    say!(out, "alpha {:?}", fit.params.alpha)?;
                    say!(out, "beta {:?}", fit.params.beta)?;
                    say!(out, "gamma {:?}", fit.params.gamma)?;
                    say!(out, "sse {:?}", fit.sse)?;
                    say!(out, "evaluations {}", fit.evaluations)
                }
                HwAlgo::Foa => {
                    let objective = HoltWintersObjective::new(series);
                    let problem = Problem::new(&objective, hw_encoding(), ObjectiveSense::Minimize);
                    let rec = foa::run(&problem, &FoaParams::default(), &Budget::evaluations(*evals), seed)?;
                    save_record(&rec, record.as_deref())?;
                    let x = rec.best.value.as_real().expect("real genome");
                    say!(out, "algorithm foa")?;
                    say!(out, "alpha {:?}", x[0])?;
                    say!(out, "beta {:?}", x[1])?;
                    say!(out, "gamma {:?}", x[2])?;
                    say!(out, "sse {:?}", rec.best_fitness)?;
                    say!(out, "evaluations {}", rec.evaluations)
                }
            }
        }
        Command::Bench(BenchCommand::GaVsDp {
            sizes,
            tightness,
            reps,
            evals,
            format,
            out: out_path,
        }) => {
            let config = BenchConfig {
                sizes: sizes.clone(),
                tightness: *tightness,
                repetitions: *reps,
                seed,
                ga_evaluations: *evals,
                ..BenchConfig::default()
            };
            let report = bench_ga_vs_dp(&config)?;
            let format = ReportFormat::from(*format);
            let name = format!("bench_ga_vs_dp.{}", format.extension());
            let dest = destination(out_path.as_deref(), out_dir, &name);
            if let Some(path) = emit(&report.render(format), dest, out)? {
                say!(out, "wrote {}", path.display())?;
                for (alg, slope) in &report.slopes {
                    say!(out, "slope {alg} {slope:.4}")?;
                }
            }
            Ok(())
        }
        Command::Gen(cmd) => {
            let (text, name) = match cmd {
                GenCommand::Knapsack { n, tightness, .. } => {
                    (gen_knapsack(*n, *tightness, seed)?, format!("knapsack_n{n}_s{seed}.txt"))
                }
                GenCommand::Tsp { n, metric, .. } => {
                    (gen_tsp(*n, (*metric).into(), seed)?, format!("tsp_n{n}_s{seed}.tsp"))
                }
                GenCommand::Series { season, seasons, .. } => (
                    gen_series(*season, *seasons, seed)?,
                    format!("series_m{season}_s{seed}.csv"),
                ),
            };
            let explicit = match cmd {
                GenCommand::Knapsack { out, .. }
                | GenCommand::Tsp { out, .. }
                | GenCommand::Series { out, .. } => out.as_deref(),
            };
            let written = emit(&text, destination(explicit, out_dir, &name), out)?;
            if let (GenCommand::Series { season, .. }, Some(path)) = (cmd, &written) {
                let sidecar = crate::benchmarks::io::sidecar_path(path);
                std::fs::write(&sidecar, format!("{{\"season_length\": {season}}}\n"))
                    .map_err(|e| HarnessError::io(&sidecar, e))?;
            }
            if let Some(path) = written {
                say!(out, "wrote {}", path.display())?;
            }
            Ok(())
        }
        Command::Experiment { spec } => {
            let spec = ExperimentSpec::from_json(&read_text(spec)?)?;
            let result = run_experiment(&spec)?;
            if spec.output.is_none() {
                write_out(out, &result.to_json())?;
            } else {
                say!(out, "cells {}", result.cells.len())?;
            }
            Ok(())
        }
    }
}
