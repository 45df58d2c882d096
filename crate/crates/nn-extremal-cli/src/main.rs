//! Command-line interface: evaluate configurations, search for maximizers,
//! sweep the three-point bound, sample landscape slices, and replay the
//! bounding inequalities.
//!
//! Exit codes: 0 success; 1 validation error (bad flags, malformed input,
//! violated preconditions); 2 property violation (a residual check fails or
//! an observed objective value exceeds the 2a^2+2b^2 bound).

mod io;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nn_extremal::{
    brute_force_grid, check_theorem_bound, multistart, multistart_with_starts, run_all_suites,
    s3, s3_breakpoints, slice, sweep_vs_s3, CertifyError, Configuration, ConfigurationData,
    Family, GeomError, LandscapeError, OptError, Rect, SearchParams, SliceSpec, SuiteParams,
    BOUND_SLACK,
};

use crate::io::{closed_form_csv, compare_csv, slice_csv, to_json, utc_timestamp, RunManifest};

#[derive(Parser)]
#[command(
    name = "nn-extremal",
    version,
    about = "Sum of squared nearest-neighbor distances in a rectangle: evaluation, extremal search, and verification"
)]
struct Cli {
    /// Relative tolerance for identity/inequality residual checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_identity: f64,

    /// Absolute tolerance for point containment in the rectangle.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_contain: f64,

    /// Two points closer than this are treated as coincident.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_distinct: f64,

    /// Write a JSON run manifest (command, args, seed, timestamp, outputs).
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate nearest-neighbor distances and their squared sum for a
    /// configuration JSON file.
    Sigma {
        /// Input configuration: {"rect":{"a":..,"b":..},"points":[[x,y],..]}.
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Write the summary JSON here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Search for a configuration maximizing the objective.
    Maximize {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Number of points.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-seed the search with the exact maximizer of the m-resolution
        /// lattice oracle.
        #[arg(long, value_name = "M")]
        grid: Option<usize>,
        /// Run simulated annealing before the pattern-search polish.
        #[arg(long)]
        anneal: bool,
        /// Initial probe step as a fraction of min(a, b).
        #[arg(long, default_value_t = 0.25)]
        init_step: f64,
        #[arg(long, default_value_t = 0.5)]
        shrink: f64,
        #[arg(long, default_value_t = 1e-9)]
        min_step: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: u32,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sweep aspect ratios of the exact three-point bound; optionally pair
    /// each ratio with a searched maximum.
    SweepS3(SweepArgs),
    /// Sample the objective along one point's abscissa.
    Slice {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Index of the moving point.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run every residual family; exit 2 if any check fails.
    Certify {
        /// Random instances per family, on top of the endpoint instances.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Exhaustive lattice search for small n (exact on its lattice).
    Oracle {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: usize,
        /// Lattice resolution: sites are (i*a/m, j*b/m).
        #[arg(long)]
        m: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.3)]
    min_ratio: f64,
    #[arg(long, default_value_t = 3.5)]
    max_ratio: f64,
    /// Evenly spaced ratio count; the four exact breakpoints are always added.
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// With restarts > 0 the primary output becomes the search comparison.
    #[arg(long, default_value_t = 0)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Primary CSV destination (closed form, or comparison when searching).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the closed-form CSV here when searching.
    #[arg(long, value_name = "PATH")]
    closed_out: Option<PathBuf>,
}

enum Failure {
    Validation(String),
    Property(String),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<OptError> for Failure {
    fn from(e: OptError) -> Self {
        match e {
            OptError::Counterexample(v) => Failure::Property(v.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<LandscapeError> for Failure {
    fn from(e: LandscapeError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Validation(format!("json error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let ok = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    if let Err(failure) = init_threads().and_then(|()| run(&cli)) {
        match failure {
            Failure::Validation(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Failure::Property(msg) => {
                eprintln!("property violation: {msg}");
                ExitCode::from(2)
            }
        }
    } else {
        ExitCode::SUCCESS
    }
}

/// NN_EXTREMAL_THREADS caps the worker count; 0 or unset means automatic.
fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("NN_EXTREMAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::Validation(format!(
            "NN_EXTREMAL_THREADS must be a nonnegative integer, got {raw:?}"
        ))
    })?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut outputs: Vec<String> = Vec::new();
    let (args, seed) = dispatch(cli, &mut outputs)?;
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: command_name(&cli.command).to_string(),
            args,
            seed,
            timestamp: utc_timestamp(),
            outputs,
        };
        fs::write(path, to_json(&manifest)?)?;
    }
    Ok(())
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Sigma { .. } => "sigma",
        Command::Maximize { .. } => "maximize",
        Command::SweepS3 { .. } => "sweep-s3",
        Command::Slice { .. } => "slice",
        Command::Certify { .. } => "certify",
        Command::Oracle { .. } => "oracle",
    }
}

fn emit(text: &str, out: Option<&Path>, outputs: &mut Vec<String>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            outputs.push(path.display().to_string());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli, outputs: &mut Vec<String>) -> Result<(BTreeMap<String, String>, u64), Failure> {
    let mut args = BTreeMap::new();
    let mut arg = |k: &str, v: String| {
        args.insert(k.to_string(), v);
    };
    arg("tol-identity", cli.tol_identity.to_string());
    arg("tol-contain", cli.tol_contain.to_string());
    arg("tol-distinct", cli.tol_distinct.to_string());

    let seed = match &cli.command {
        Command::Sigma { input, out } => {
            arg("in", input.display().to_string());
            let text = fs::read_to_string(input)?;
            let data: ConfigurationData = serde_json::from_str(&text)?;
            let config = Configuration::with_tolerances(
                data.rect,
                data.points,
                cli.tol_contain,
                cli.tol_distinct,
            )?;
            let summary = config.nn_summary();
            check_theorem_bound(summary.sigma, config.rect(), BOUND_SLACK)
                .map_err(|v| Failure::Property(v.to_string()))?;
            emit(&to_json(&summary)?, out.as_deref(), outputs)?;
            0
        }
        Command::Maximize {
            a,
            b,
            n,
            restarts,
            seed,
            grid,
            anneal,
            init_step,
            shrink,
            min_step,
            max_iters,
            out,
        } => {
            arg("a", a.to_string());
            arg("b", b.to_string());
            arg("n", n.to_string());
            arg("restarts", restarts.to_string());
            arg("seed", seed.to_string());
            arg("anneal", anneal.to_string());
            if let Some(m) = grid {
                arg("grid", m.to_string());
            }
            let rect = Rect::new(*a, *b)?;
            let params = SearchParams {
                restarts: *restarts,
                init_step: *init_step,
                shrink: *shrink,
                min_step: *min_step,
                max_iters: *max_iters,
                seed: *seed,
                anneal: *anneal,
            };
            let report = match grid {
                Some(m) => {
                    let oracle = brute_force_grid(rect, *n, *m)?;
                    multistart_with_starts(rect, *n, &params, &[oracle.best_config])?
                }
                None => multistart(rect, *n, &params)?,
            };
            emit(&to_json(&report)?, out.as_deref(), outputs)?;
            *seed
        }
        Command::SweepS3(sweep) => {
            arg("min-ratio", sweep.min_ratio.to_string());
            arg("max-ratio", sweep.max_ratio.to_string());
            arg("count", sweep.count.to_string());
            arg("restarts", sweep.restarts.to_string());
            arg("seed", sweep.seed.to_string());
            run_sweep(sweep, outputs)?;
            sweep.seed
        }
        Command::Slice {
            seed,
            n,
            index,
            samples,
            a,
            b,
            out,
        } => {
            arg("seed", seed.to_string());
            arg("n", n.to_string());
            arg("index", index.to_string());
            arg("samples", samples.to_string());
            arg("a", a.to_string());
            arg("b", b.to_string());
            let rect = Rect::new(*a, *b)?;
            let spec = SliceSpec {
                seed: *seed,
                n: *n,
                moving_index: *index,
                samples: *samples,
                rect,
            };
            let rows = slice(&spec)?;
            for row in &rows {
                check_theorem_bound(row.sigma, rect, BOUND_SLACK)
                    .map_err(|v| Failure::Property(v.to_string()))?;
            }
            emit(&slice_csv(&rows), out.as_deref(), outputs)?;
            *seed
        }
        Command::Certify { trials, seed, out } => {
            arg("trials", trials.to_string());
            arg("seed", seed.to_string());
            let params = SuiteParams {
                trials: *trials,
                seed: *seed,
                tol: cli.tol_identity,
            };
            let reports = run_all_suites(&params);
            let failed = reports.iter().filter(|r| !r.ok).count();
            emit(&to_json(&reports)?, out.as_deref(), outputs)?;
            eprintln!(
                "certify: {} families, {} reports, {} failed",
                Family::ALL.len(),
                reports.len(),
                failed
            );
            if failed > 0 {
                return Err(Failure::Property(format!(
                    "{failed} of {} residual checks failed",
                    reports.len()
                )));
            }
            *seed
        }
        Command::Oracle { a, b, n, m, out } => {
            arg("a", a.to_string());
            arg("b", b.to_string());
            arg("n", n.to_string());
            arg("m", m.to_string());
            let report = brute_force_grid(Rect::new(*a, *b)?, *n, *m)?;
            emit(&to_json(&report)?, out.as_deref(), outputs)?;
            0
        }
    };
    Ok((args, seed))
}

fn run_sweep(sweep: &SweepArgs, outputs: &mut Vec<String>) -> Result<(), Failure> {
    if !(sweep.min_ratio > 0.0 && sweep.max_ratio >= sweep.min_ratio) {
        return Err(Failure::Validation(format!(
            "ratio range [{}, {}] must be positive and ordered",
            sweep.min_ratio, sweep.max_ratio
        )));
    }
    if sweep.count < 2 {
        return Err(Failure::Validation("count must be at least 2".into()));
    }
    let mut ratios: Vec<f64> = (0..sweep.count)
        .map(|k| {
            sweep.min_ratio
                + k as f64 * (sweep.max_ratio - sweep.min_ratio) / (sweep.count - 1) as f64
        })
        .collect();
    ratios.extend(
        s3_breakpoints()
            .into_iter()
            .filter(|r| (sweep.min_ratio..=sweep.max_ratio).contains(r)),
    );
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();

    let closed: Vec<(f64, f64, u8, f64)> = ratios
        .iter()
        .map(|&r| {
            let v = s3(1.0, r)?;
            Ok((r, v.value, v.piece, v.value / (1.0 + r * r)))
        })
        .collect::<Result<_, GeomError>>()?;

    if sweep.restarts == 0 {
        emit(&closed_form_csv(&closed), sweep.out.as_deref(), outputs)?;
        return Ok(());
    }

    let params = SearchParams {
        restarts: sweep.restarts,
        seed: sweep.seed,
        ..Default::default()
    };
    let rows = sweep_vs_s3(&ratios, &params)?;
    emit(&compare_csv(&rows), sweep.out.as_deref(), outputs)?;
    if let Some(path) = &sweep.closed_out {
        emit(&closed_form_csv(&closed), Some(path), outputs)?;
    }
    Ok(())
}
