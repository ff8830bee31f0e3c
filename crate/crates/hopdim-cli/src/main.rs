//! `hopdim`: resource dimensioning for frequency-hopped packet repetition
//! under dense persistent interference.
//!
//! Single-point commands emit one JSON object to stdout (text behind
//! `--pretty`); the sweep commands emit CSV. Exit codes: 0 success, 2 usage,
//! 3 domain/precondition, 4 statistical precondition.

mod report;
mod sweeps;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hopdim::{
    analytic, estimate_failure, numerics, search_min_ru, GridSpec, Method, ResourceGrid,
    SampleMode, ScenarioConfig, SimJob,
};
use report::{write_output, Report};
use sweeps::{sweep_fig3, sweep_fig4, Fig3Spec, Fig4Spec, SweepMethod};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Statistical(String),
    Io(String),
}

impl From<hopdim::Error> for CliError {
    fn from(e: hopdim::Error) -> Self {
        match e {
            hopdim::Error::StatisticalPrecondition(_) => CliError::Statistical(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Statistical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hopdim",
    version,
    about = "Dimension time-frequency resources for frequency-hopped packet repetition under persistent interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Human-readable text instead of JSON (single-result commands)
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads for simulation (default: all cores)
    #[arg(long, global = true, env = "HOPDIM_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form failure probability, resource and repetition counts
    Analytic {
        #[command(subcommand)]
        quantity: AnalyticCommand,
    },
    /// Numeric inversion: smallest n_ru meeting the target, any ncmax
    Invert(InvertArgs),
    /// Monte-Carlo estimation of the failure probability
    Simulate(SimulateArgs),
    /// Empirical minimum-resource search
    Search(SearchArgs),
    /// CSV sweep: required n_ru versus repetition count
    SweepFig3(SweepFig3Args),
    /// CSV sweep: asymptotic versus reference minimum n_ru over d
    SweepFig4(SweepFig4Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Latin,
    Uniform,
}

impl From<ModeArg> for SampleMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Latin => SampleMode::Latin,
            ModeArg::Uniform => SampleMode::Uniform,
        }
    }
}

#[derive(Subcommand)]
enum AnalyticCommand {
    /// Failure probability for a given grid size
    Failure {
        /// Packet repetitions per frame
        #[arg(long)]
        n: u64,
        /// Number of interfering devices
        #[arg(long)]
        d: u64,
        /// Total resource units in the frame
        #[arg(long)]
        nru: u64,
        /// Resolvable collisions per resource unit
        #[arg(long, default_value_t = 0)]
        ncmax: u64,
    },
    /// Resource units required for a target at a given repetition count
    RequiredRu {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        /// Target failure probability
        #[arg(long)]
        pf: f64,
        /// 0 or 1 (closed forms; use `invert` for ncmax >= 2)
        #[arg(long, default_value_t = 0)]
        ncmax: u64,
    },
    /// Minimum resource units over all repetition choices
    MinRu {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        pf: f64,
        /// 0 or 1 (closed forms; use `invert` for ncmax >= 2)
        #[arg(long, default_value_t = 0)]
        ncmax: u64,
    },
    /// Continuous repetition count minimizing resource usage
    OptReps {
        #[arg(long)]
        pf: f64,
        /// 0 or 1
        #[arg(long, default_value_t = 0)]
        ncmax: u64,
    },
}

#[derive(Args)]
struct InvertArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    pf: f64,
    #[arg(long, default_value_t = 0)]
    ncmax: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    /// Resource units; the grid is factorized automatically
    #[arg(long, conflicts_with_all = ["p", "q"])]
    nru: Option<u64>,
    /// Frequency channels (with --q)
    #[arg(long, requires = "q")]
    p: Option<u64>,
    /// Time slots (with --p)
    #[arg(long, requires = "p")]
    q: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Latin)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    ncmax: u64,
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    pf: f64,
    #[arg(long, default_value_t = 0)]
    ncmax: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Latin)]
    mode: ModeArg,
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct SweepFig3Args {
    #[arg(long, default_value_t = 100)]
    d: u64,
    #[arg(long, default_value_t = 1e-6)]
    pf: f64,
    /// Comma-separated receiver capabilities
    #[arg(long, default_value = "0,1,2,3", value_name = "LIST")]
    ncmax_list: String,
    /// Inclusive repetition range, e.g. 2..26
    #[arg(long, default_value = "2..26", value_name = "LO..HI")]
    n_range: String,
    /// Comma-separated subset of closed_form,numeric,montecarlo
    #[arg(long, default_value = "closed_form,numeric", value_name = "LIST")]
    methods: String,
    /// Sampling mode for the montecarlo method
    #[arg(long, value_enum, default_value_t = ModeArg::Latin)]
    mode: ModeArg,
    /// Samples per montecarlo candidate
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepFig4Args {
    /// Comma-separated interferer counts
    #[arg(long, default_value = "10,20,50,100,200,500,1000", value_name = "LIST")]
    d_list: String,
    #[arg(long, default_value_t = 1e-6)]
    pf: f64,
    /// Comma-separated subset of 0,1
    #[arg(long, default_value = "0,1", value_name = "LIST")]
    ncmax_list: String,
}

fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let list: Result<Vec<u64>, _> = s.split(',').map(|p| p.trim().parse::<u64>()).collect();
    match list {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("invalid {what} list '{s}'"))),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() == 2 {
        if let (Ok(lo), Ok(hi)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((lo, hi));
        }
    }
    Err(CliError::Usage(format!(
        "invalid range '{s}' (expected LO..HI, inclusive)"
    )))
}

// ---- single-result reports --------------------------------------------

#[derive(Serialize)]
struct FailureInputs {
    n: u64,
    d: u64,
    n_ru: u64,
    ncmax: u64,
}

#[derive(Serialize)]
struct ProbabilityResult {
    p_f: f64,
    method: Method,
}

#[derive(Serialize)]
struct TargetInputs {
    n: u64,
    d: u64,
    pf_target: f64,
    ncmax: u64,
}

#[derive(Serialize)]
struct RuResult {
    n_ru: u64,
    method: Method,
}

#[derive(Serialize)]
struct MinRuInputs {
    d: u64,
    pf_target: f64,
    ncmax: u64,
}

#[derive(Serialize)]
struct MinRuResult {
    n_ru: u64,
    n_star: f64,
    method: Method,
}

#[derive(Serialize)]
struct OptRepsInputs {
    pf_target: f64,
    ncmax: u64,
}

#[derive(Serialize)]
struct OptRepsResult {
    n_star: f64,
    method: Method,
}

#[derive(Serialize)]
struct SimulateInputs {
    n: u64,
    d: u64,
    p: u64,
    q: u64,
    n_ru: u64,
    mode: SampleMode,
    ncmax: u64,
    samples: u64,
    seed: u64,
    chunk_size: u64,
}

#[derive(Serialize)]
struct SimulateResult {
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    failures: u64,
    samples: u64,
    seed: u64,
    method: Method,
}

#[derive(Serialize)]
struct SearchInputs {
    n: u64,
    d: u64,
    pf_target: f64,
    ncmax: u64,
    mode: SampleMode,
    samples: u64,
    seed: u64,
}

fn require_closed_form_ncmax(ncmax: u64) -> Result<(), CliError> {
    if ncmax > 1 {
        return Err(CliError::Usage(format!(
            "closed forms exist for ncmax 0 and 1 only (got {ncmax}); use `invert` for larger values"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let pretty = cli.pretty;
    match &cli.command {
        Command::Analytic { quantity } => match *quantity {
            AnalyticCommand::Failure { n, d, nru, ncmax } => {
                let p_f = analytic::failure_prob_resolvable(n, d, nru, ncmax)?;
                Report::new(
                    "analytic.failure",
                    FailureInputs { n, d, n_ru: nru, ncmax },
                    ProbabilityResult { p_f, method: Method::ClosedForm },
                )
                .emit(out, pretty)?;
            }
            AnalyticCommand::RequiredRu { n, d, pf, ncmax } => {
                require_closed_form_ncmax(ncmax)?;
                let n_ru = match ncmax {
                    0 => analytic::required_ru_no_resolution(n, d, pf)?,
                    _ => analytic::required_ru_single_resolution(n, d, pf)?,
                };
                Report::new(
                    "analytic.required_ru",
                    TargetInputs { n, d, pf_target: pf, ncmax },
                    RuResult { n_ru, method: Method::ClosedForm },
                )
                .emit(out, pretty)?;
            }
            AnalyticCommand::MinRu { d, pf, ncmax } => {
                require_closed_form_ncmax(ncmax)?;
                let (n_ru, n_star) = match ncmax {
                    0 => (
                        analytic::min_ru_no_resolution(d, pf)?,
                        analytic::optimal_reps_no_resolution(pf)?,
                    ),
                    _ => (
                        analytic::min_ru_single_resolution(d, pf)?,
                        analytic::optimal_reps_single_resolution(pf)?,
                    ),
                };
                Report::new(
                    "analytic.min_ru",
                    MinRuInputs { d, pf_target: pf, ncmax },
                    MinRuResult { n_ru, n_star, method: Method::ClosedForm },
                )
                .emit(out, pretty)?;
            }
            AnalyticCommand::OptReps { pf, ncmax } => {
                require_closed_form_ncmax(ncmax)?;
                let n_star = match ncmax {
                    0 => analytic::optimal_reps_no_resolution(pf)?,
                    _ => analytic::optimal_reps_single_resolution(pf)?,
                };
                Report::new(
                    "analytic.opt_reps",
                    OptRepsInputs { pf_target: pf, ncmax },
                    OptRepsResult { n_star, method: Method::ClosedForm },
                )
                .emit(out, pretty)?;
            }
        },
        Command::Invert(a) => {
            let n_ru = numerics::invert_required_ru_numeric(a.n, a.d, a.pf, a.ncmax)?;
            Report::new(
                "invert",
                TargetInputs { n: a.n, d: a.d, pf_target: a.pf, ncmax: a.ncmax },
                RuResult { n_ru, method: Method::NumericInversion },
            )
            .emit(out, pretty)?;
        }
        Command::Simulate(a) => {
            let mode: SampleMode = a.mode.into();
            // pf_target is not part of an estimation job; the scenario type
            // still wants a valid value
            let scenario = ScenarioConfig::new(a.d, a.n, 0.5, a.ncmax)?;
            let grid_spec = match (a.nru, a.p, a.q) {
                (Some(n_ru), None, None) => GridSpec::Auto { n_ru },
                (None, Some(p), Some(q)) => GridSpec::Explicit(ResourceGrid::new(p, q)?),
                _ => {
                    return Err(CliError::Usage(
                        "specify the grid as --nru N or as --p P --q Q".into(),
                    ))
                }
            };
            let job = SimJob::new(scenario, grid_spec, mode, a.samples, a.seed);
            let grid = job.resolve_grid()?;
            let est = with_thread_pool(cli.threads, || estimate_failure(&job))??;
            Report::new(
                "simulate",
                SimulateInputs {
                    n: a.n,
                    d: a.d,
                    p: grid.p,
                    q: grid.q,
                    n_ru: grid.n_ru(),
                    mode,
                    ncmax: a.ncmax,
                    samples: a.samples,
                    seed: a.seed,
                    chunk_size: job.chunk_size,
                },
                SimulateResult {
                    p_hat: est.p_hat,
                    ci_low: est.ci_low,
                    ci_high: est.ci_high,
                    failures: est.failures,
                    samples: est.samples,
                    seed: est.seed,
                    method: Method::MonteCarlo,
                },
            )
            .emit(out, pretty)?;
        }
        Command::Search(a) => {
            let mode: SampleMode = a.mode.into();
            let result = with_thread_pool(cli.threads, || {
                search_min_ru(a.n, a.d, a.pf, a.ncmax, mode, a.samples, a.seed)
            })??;
            Report::new(
                "search",
                SearchInputs {
                    n: a.n,
                    d: a.d,
                    pf_target: a.pf,
                    ncmax: a.ncmax,
                    mode,
                    samples: a.samples,
                    seed: a.seed,
                },
                result,
            )
            .emit(out, pretty)?;
        }
        Command::SweepFig3(a) => {
            let (n_lo, n_hi) = parse_range(&a.n_range)?;
            let spec = Fig3Spec {
                d: a.d,
                pf_target: a.pf,
                ncmax_list: parse_u64_list(&a.ncmax_list, "ncmax")?,
                n_lo,
                n_hi,
                methods: SweepMethod::parse_list(&a.methods)?,
                mode: a.mode.into(),
                samples: a.samples,
                seed: a.seed,
            };
            let csv = with_thread_pool(cli.threads, || sweep_fig3(&spec))??;
            write_output(&csv, out)?;
        }
        Command::SweepFig4(a) => {
            let spec = Fig4Spec {
                d_list: parse_u64_list(&a.d_list, "d")?,
                pf_target: a.pf,
                ncmax_list: parse_u64_list(&a.ncmax_list, "ncmax")?,
            };
            let csv = sweep_fig4(&spec)?;
            write_output(&csv, out)?;
        }
    }
    Ok(())
}

/// Run `f` inside a dedicated rayon pool when a thread count is requested.
/// Results are identical either way; this only bounds the parallelism.
fn with_thread_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (label, msg) = match &e {
                CliError::Usage(m) => ("usage error", m),
                CliError::Domain(m) => ("domain error", m),
                CliError::Statistical(m) => ("statistical error", m),
                CliError::Io(m) => ("io error", m),
            };
            eprintln!("hopdim: {label}: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
