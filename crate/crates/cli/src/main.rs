use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use backbend_core::estimate::{PcStatistic, SuccessPredicate};
use backbend_core::{BackbendSpec, Region, Vertex, Window};
use clap::{Args, Parser, Subcommand};

mod commands;
mod record;
mod sweep;

/// Exit status of a subcommand that ran to completion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Ok,
    InvalidPath,
    WalkExceedsPaths,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Ok => ExitCode::SUCCESS,
            Outcome::InvalidPath => ExitCode::from(2),
            Outcome::WalkExceedsPaths => ExitCode::from(3),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "backbend-perc", version, about = "Backbend bond percolation on the BCC lattice")]
struct Cli {
    /// Worker threads for Monte Carlo trials. Results do not depend on it.
    #[arg(long, global = true, env = "BACKBEND_PERC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a path file against a backbend sequence.
    ValidatePath(ValidatePathArgs),
    /// Estimate the survival probability at one p.
    Theta(ThetaArgs),
    /// Bisect the critical point.
    Pc(PcArgs),
    /// Run a config-file experiment (curve, ladder or compare).
    Sweep(SweepArgs),
    /// Compare the walk cluster with exhaustive self-avoiding enumeration.
    Oracle(OracleArgs),
    /// Estimate the probability of a seed-block event.
    BlockEvent(BlockEventArgs),
    /// Print the JSON schema of result records or sweep config files.
    Schema {
        #[arg(value_enum, default_value = "result")]
        which: SchemaKind,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum SchemaKind {
    Result,
    Sweep,
}

#[derive(Args, Debug)]
struct ValidatePathArgs {
    #[arg(long)]
    beta: BackbendSpec,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value = "V")]
    region: Region,
    /// One vertex per line, coordinates separated by spaces.
    #[arg(long)]
    path_file: PathBuf,
}

/// Options shared by every Monte Carlo subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value = "const:0")]
    pub beta: BackbendSpec,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value = "H")]
    pub region: Region,
    /// Master seed. Drawn from entropy and reported when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub reproducible: bool,
    /// Write the JSON record here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, allow_hyphen_values = true)]
    window: Window,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// `top`, `level:<L>`, `size:<N>` or `span:<axis>`.
    #[arg(long, default_value = "top", value_parser = parse_predicate)]
    predicate: SuccessPredicate,
    /// Source vertices separated by `;` (default: the origin).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vertices)]
    sources: Option<Vec<Vertex>>,
}

#[derive(Args, Debug)]
struct PcArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Windows separated by commas, smallest first.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required_unless_present = "synthetic_threshold")]
    window_ladder: Vec<Window>,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    #[arg(long, default_value_t = 400)]
    trials: u64,
    #[arg(long, default_value_t = 25_600)]
    max_trials: u64,
    #[arg(long, default_value = "top", value_parser = parse_predicate)]
    predicate: SuccessPredicate,
    /// `frequency` or `curvature:<base level>`.
    #[arg(long, default_value = "frequency", value_parser = parse_statistic)]
    statistic: PcStatistic,
    /// Bisect a deterministic process that succeeds iff p exceeds this value.
    #[arg(long)]
    synthetic_threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's trial count.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    reproducible: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the result table as CSV here (overrides the config's `csv`).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, allow_hyphen_values = true)]
    window: Window,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vertices)]
    sources: Option<Vec<Vertex>>,
    /// Allow windows above the default vertex guard (at most 64).
    #[arg(long)]
    force: bool,
    /// Write the walk cluster as CSV coordinate rows.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BlockEventArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, allow_hyphen_values = true)]
    window: Window,
    #[arg(long)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    x: Vertex,
    #[arg(long, allow_hyphen_values = true)]
    z: Vertex,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

pub fn parse_predicate(s: &str) -> Result<SuccessPredicate, String> {
    let num = |t: &str| t.trim().parse().map_err(|_| format!("bad number `{t}` in predicate `{s}`"));
    match s.split_once(':') {
        None if s == "top" => Ok(SuccessPredicate::SurviveToLevel { level: None }),
        Some(("level", v)) => Ok(SuccessPredicate::SurviveToLevel { level: Some(num(v)?) }),
        Some(("size", v)) => Ok(SuccessPredicate::ClusterSize { min: num(v)? as usize }),
        Some(("span", v)) => Ok(SuccessPredicate::Span { axis: num(v)? as usize }),
        _ => Err(format!("unknown predicate `{s}` (top, level:<L>, size:<N>, span:<axis>)")),
    }
}

pub fn parse_statistic(s: &str) -> Result<PcStatistic, String> {
    match s.split_once(':') {
        None if s == "frequency" => Ok(PcStatistic::Frequency),
        Some(("curvature", b)) => Ok(PcStatistic::SurvivalCurvature {
            base: b.trim().parse().map_err(|_| format!("bad base level `{b}`"))?,
        }),
        _ => Err(format!("unknown statistic `{s}` (frequency, curvature:<base>)")),
    }
}

fn parse_vertices(s: &str) -> Result<Vec<Vertex>, String> {
    s.split(';').map(|v| v.parse::<Vertex>().map_err(|e| e.to_string())).collect()
}

/// The window's dimension, checked against an explicit `--dim`.
pub fn checked_dim(dim: Option<usize>, window: &Window) -> Result<usize> {
    match dim {
        Some(d) if d != window.dim() => bail!("--dim {d} does not match window dimension {}", window.dim()),
        _ => Ok(window.dim()),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::ValidatePath(a) => commands::validate_path(&a.beta, a.dim, &a.region, &a.path_file),
        Command::Theta(a) => commands::theta(&a.run, a.window, a.p, a.trials, a.predicate, a.sources),
        Command::Pc(a) => commands::pc(commands::PcRequest {
            run: &a.run,
            windows: &a.window_ladder,
            lo: a.lo,
            hi: a.hi,
            tol: a.tol,
            target: a.target,
            trials: a.trials,
            max_trials: a.max_trials,
            predicate: a.predicate,
            statistic: a.statistic,
            synthetic: a.synthetic_threshold,
        }),
        Command::Sweep(a) => sweep::run(&a.config, a.seed, a.trials, a.reproducible, a.out.as_deref(), a.csv.as_deref()),
        Command::Oracle(a) => commands::oracle(&a.run, a.window, a.p, a.trial, a.sources, a.force, a.dump.as_deref()),
        Command::BlockEvent(a) => commands::block_event(&a.run, a.window, a.r, a.x, a.z, a.p, a.trials),
        Command::Schema { which } => {
            let text = match which {
                SchemaKind::Result => record::RESULT_SCHEMA,
                SchemaKind::Sweep => record::SWEEP_SCHEMA,
            };
            print!("{text}");
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match cli.threads {
        Some(0) => Err(anyhow::anyhow!("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool"),
        None => rayon::ThreadPoolBuilder::new().build().context("building thread pool"),
    };
    let result = pool.and_then(|pool| pool.install(|| run(cli)));
    match result {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
