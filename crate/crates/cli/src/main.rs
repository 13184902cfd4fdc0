//! `dl`: locality-regularized coding and Delaunay simplex identification.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 resource
//! limit.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dl_core::api::{identify, solution_path, IdentifyOpts, Method, PathOptions};
use dl_core::experiments::{
    bench_csv, bound_compare_csv, exp_bound_comparison, exp_scaling, exp_solution_path,
    exp_support_accuracy, gen_dictionary, sample_from_hull, support_accuracy_csv, derive_seed,
    ExperimentConfig, Profile, RhoGrid,
};
use dl_core::io::{
    dictionary_to_csv, dictionary_to_json, parse_dictionary_csv, parse_dictionary_json,
    parse_queries_csv, parse_rho_grid, to_schema_json, write_point_rows,
};
use dl_core::oracle::enumerate_delaunay;
use dl_core::qp::QpOptions;
use dl_core::{Dictionary, Error};

#[derive(Parser)]
#[command(name = "dl", version, about = "Local simplex coding over a fixed dictionary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded dictionary (and optionally hull-sampled queries).
    Gen(GenArgs),
    /// Enumerate the brute-force Delaunay complex of a dictionary.
    Oracle(OracleArgs),
    /// Identify the local support of each query by one method.
    Identify(IdentifyArgs),
    /// Sweep the regularization grid and dump full solution paths.
    Path(PathArgs),
    /// Compare the identification bound against the largest working rho.
    BoundCompare(BoundCompareArgs),
    /// Support accuracy of the relaxed solver against the exact one.
    SupportAccuracy(SupportAccuracyArgs),
    /// Wall-time benchmark of the identification methods.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mean-center and scale to maximum atom norm 1.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    normalize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Also sample this many queries from the hull.
    #[arg(long)]
    queries: Option<usize>,
    /// Where to write the sampled queries (CSV).
    #[arg(long, requires = "queries")]
    queries_out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Dictionary file (.csv or .json).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolverFlags {
    /// Interior-point tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Weight threshold for support extraction.
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
}

impl SolverFlags {
    fn qp(&self) -> QpOptions {
        QpOptions { tol: self.tol, max_iter: self.max_iter }
    }
}

#[derive(Args)]
struct IdentifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Query points, one row per query.
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Regularization for the relaxed method (default: half the
    /// identification bound when computable, else 1e-7).
    #[arg(long)]
    rho: Option<f64>,
    /// Cross-check each answer against the oracle.
    #[arg(long, default_value_t = false)]
    verify: bool,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct PathArgs {
    /// Dictionary file; omit to generate one from --n/--d/--seed instead.
    #[arg(long = "in", required_unless_present = "n")]
    input: Option<PathBuf>,
    /// Query file; in generation mode, the number of hull samples.
    #[arg(long, required = true)]
    queries: String,
    #[arg(long, requires = "d")]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid spec base:kmin:kmax, expanded to base^k descending.
    #[arg(long, default_value = "2:-32:2")]
    rho_grid: String,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentFlags {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query count; defaults to the profile's size.
    #[arg(long)]
    queries: Option<usize>,
    #[arg(long, default_value = "ci")]
    profile: Profile,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct BoundCompareArgs {
    #[command(flatten)]
    exp: ExperimentFlags,
    #[arg(long, default_value = "2:-32:2")]
    rho_grid: String,
}

#[derive(Args)]
struct SupportAccuracyArgs {
    #[command(flatten)]
    exp: ExperimentFlags,
    #[arg(long, default_value = "1.5:-32:19")]
    rho_grid: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Atom counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Queries per (n, d) cell.
    #[arg(long, default_value_t = 50)]
    queries: usize,
    /// Methods to time, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_method,
          default_values_t = vec![Method::Relaxed, Method::Exact, Method::Chlp])]
    method: Vec<Method>,
    /// Fixed regularization for the relaxed method (default: per-query bound).
    #[arg(long)]
    rho: Option<f64>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => 4,
        Error::SolverFailure(_) | Error::SingularKkt(_) => 3,
        _ => 2,
    }
}

fn read_dictionary(path: &Path) -> Result<Dictionary, Error> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_dictionary_json(&text)
    } else {
        parse_dictionary_csv(&text)
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Gen(args) => {
            let x = gen_dictionary(args.n, args.d, args.seed, args.normalize)?;
            let content = match args.format {
                OutputFormat::Csv => dictionary_to_csv(&x),
                OutputFormat::Json => {
                    let mut s = dictionary_to_json(&x);
                    s.push('\n');
                    s
                }
            };
            emit(&args.out, &content)?;
            if let Some(m) = args.queries {
                let queries = sample_from_hull(&x, m, derive_seed(args.seed, 9))?;
                emit(&args.queries_out, &write_point_rows(&queries))?;
            }
            Ok(())
        }
        Command::Oracle(args) => {
            let x = read_dictionary(&args.input)?;
            let complex = enumerate_delaunay(&x)?;
            let mut content = complex.to_json();
            content.push('\n');
            emit(&args.out, &content)
        }
        Command::Identify(args) => run_identify(args),
        Command::Path(args) => {
            let grid_spec = parse_rho_grid(&args.rho_grid)?;

            #[derive(Serialize)]
            struct PathsOut {
                paths: Vec<QueryPath>,
            }
            #[derive(Serialize)]
            struct QueryPath {
                query: usize,
                y: Vec<f64>,
                path: dl_core::api::SolutionPath,
            }

            let paths: Vec<QueryPath> = if let Some(input) = &args.input {
                let x = read_dictionary(input)?;
                let queries = parse_queries_csv(&std::fs::read_to_string(&args.queries)?, x.d())?;
                let grid = grid_spec.values();
                let opts = PathOptions { threshold: args.solver.threshold, qp: args.solver.qp() };
                let mut paths = Vec::new();
                for (qi, y) in queries.iter().enumerate() {
                    paths.push(QueryPath {
                        query: qi,
                        y: y.clone(),
                        path: solution_path(&x, y, &grid, &opts)?,
                    });
                }
                paths
            } else {
                // Generation mode: --queries is a count of hull samples.
                let num: usize = args.queries.parse().map_err(|_| {
                    Error::invalid(format!(
                        "--queries must be a count in generation mode, got '{}'",
                        args.queries
                    ))
                })?;
                let mut cfg = ExperimentConfig::new(
                    args.seed,
                    args.n.expect("clap enforces --n"),
                    args.d.expect("clap enforces --d"),
                    num,
                    grid_spec,
                );
                cfg.threshold = args.solver.threshold;
                cfg.qp = args.solver.qp();
                exp_solution_path(&cfg)?
                    .into_iter()
                    .map(|rec| QueryPath { query: rec.query, y: rec.y, path: rec.path })
                    .collect()
            };
            let mut content = to_schema_json(&PathsOut { paths });
            content.push('\n');
            emit(&args.out, &content)
        }
        Command::BoundCompare(args) => {
            let grid = parse_rho_grid(&args.rho_grid)?;
            let cfg = experiment_config(&args.exp, grid, true);
            let rows = exp_bound_comparison(&cfg)?;
            let content = match args.exp.format {
                OutputFormat::Csv => bound_compare_csv(&rows, cfg.d),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        rows: &'a [dl_core::experiments::BoundCompareRow],
                    }
                    let mut s = to_schema_json(&Out { rows: &rows });
                    s.push('\n');
                    s
                }
            };
            emit(&args.exp.out, &content)?;
            let violations = rows.iter().filter(|r| !r.satisfies_bound()).count();
            if violations > 0 {
                return Err(Error::SolverFailure(format!(
                    "{violations} rows violate the identification bound"
                )));
            }
            Ok(())
        }
        Command::SupportAccuracy(args) => {
            let grid = parse_rho_grid(&args.rho_grid)?;
            let cfg = experiment_config(&args.exp, grid, false);
            let rows = exp_support_accuracy(&cfg)?;
            let content = match args.exp.format {
                OutputFormat::Csv => support_accuracy_csv(&rows),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        rows: &'a [dl_core::experiments::SupportAccuracyRow],
                    }
                    let mut s = to_schema_json(&Out { rows: &rows });
                    s.push('\n');
                    s
                }
            };
            emit(&args.exp.out, &content)
        }
        Command::Bench(args) => {
            let mut cfg = ExperimentConfig::new(
                args.seed,
                0,
                0,
                args.queries,
                RhoGrid { base: 2.0, k_min: 0, k_max: 0 },
            );
            cfg.threshold = args.solver.threshold;
            cfg.qp = args.solver.qp();
            cfg.methods = args.method.clone();
            cfg.rho = args.rho;
            let records = exp_scaling(&cfg, &args.n, &args.d)?;
            let content = match args.format {
                OutputFormat::Csv => bench_csv(&records),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        records: &'a [dl_core::experiments::BenchRecord],
                    }
                    let mut s = to_schema_json(&Out { records: &records });
                    s.push('\n');
                    s
                }
            };
            emit(&args.out, &content)
        }
    }
}

fn experiment_config(flags: &ExperimentFlags, grid: RhoGrid, profile_sized: bool) -> ExperimentConfig {
    let queries = flags.queries.unwrap_or(if profile_sized {
        flags.profile.bound_comparison_queries()
    } else {
        50
    });
    let mut cfg = ExperimentConfig::new(flags.seed, flags.n, flags.d, queries, grid);
    cfg.threshold = flags.solver.threshold;
    cfg.qp = flags.solver.qp();
    cfg
}

#[derive(Serialize)]
struct IdentifyRecord {
    query: usize,
    status: String,
    result: Option<dl_core::api::IdentificationResult>,
}

fn run_identify(args: IdentifyArgs) -> Result<(), Error> {
    let x = read_dictionary(&args.input)?;
    let queries = parse_queries_csv(&std::fs::read_to_string(&args.queries)?, x.d())?;
    // Enumerate once; identify would otherwise rebuild the complex per query.
    let complex = if args.verify || args.method == Method::Oracle || args.rho.is_none() {
        enumerate_delaunay(&x).ok()
    } else {
        None
    };
    let opts = IdentifyOpts {
        rho: args.rho,
        threshold: args.solver.threshold,
        qp: args.solver.qp(),
        verify: args.verify,
        complex: complex.as_ref(),
    };

    let mut records = Vec::new();
    for (qi, y) in queries.iter().enumerate() {
        match identify(&x, y, args.method, &opts) {
            Ok(result) => records.push(IdentifyRecord {
                query: qi,
                status: "ok".into(),
                result: Some(result),
            }),
            Err(Error::OutsideHull(_)) => records.push(IdentifyRecord {
                query: qi,
                status: "outside-hull".into(),
                result: None,
            }),
            Err(Error::NotApplicable(reason)) => records.push(IdentifyRecord {
                query: qi,
                status: format!("not-applicable: {reason}"),
                result: None,
            }),
            Err(e) => return Err(e),
        }
    }

    let content = match args.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                method: Method,
                results: &'a [IdentifyRecord],
            }
            let mut s = to_schema_json(&Out { method: args.method, results: &records });
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut out = String::from("query,method,status,support,agrees_with_oracle\n");
            for r in &records {
                let support = r
                    .result
                    .as_ref()
                    .map(|res| {
                        res.support
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(";")
                    })
                    .unwrap_or_default();
                let agrees = r
                    .result
                    .as_ref()
                    .and_then(|res| res.agrees_with_oracle)
                    .map(|b| b.to_string())
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.query, args.method, r.status, support, agrees
                ));
            }
            out
        }
    };
    emit(&args.out, &content)
}
