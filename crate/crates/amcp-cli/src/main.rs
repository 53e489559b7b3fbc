//! `amcp`: extraction, negotiation, sweeps, baselines, MoJo queries and
//! benchmark generation from the command line.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal error.
//! Results go to files and stdout; logs go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "amcp",
    version,
    about = "Negotiated module clustering under a stability budget"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Build a dependency graph and package partition from .class files or a JAR.
    Extract(ExtractArgs),
    /// Run the concession protocol from a previous decomposition.
    Negotiate(NegotiateArgs),
    /// Run the protocol over a list of stability budgets.
    Sweep(SweepArgs),
    /// Steepest-ascent TurboMQ hill climbing, ignoring stability.
    Baseline(BaselineArgs),
    /// MoJo distance and stability utility between two partition files.
    Mojo(MojoArgs),
    /// Generate a synthetic block-structured benchmark.
    Gen(GenArgs),
}

#[derive(Debug, Args, Serialize)]
struct ExtractArgs {
    /// Directory of .class files, or a JAR/ZIP archive.
    #[arg(long)]
    input: PathBuf,
    /// Output prefix.
    #[arg(long)]
    out: PathBuf,
    /// Version label recorded in the manifest.
    #[arg(long, default_value = "current")]
    label: String,
    /// Keep nested classes as separate modules.
    #[arg(long)]
    keep_nested: bool,
    /// Weight edges by the number of referencing class files.
    #[arg(long)]
    count_weights: bool,
    /// Earlier version; writes its package structure over the shared classes
    /// as `<out>.previous.csv`.
    #[arg(long)]
    previous_version: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EngineArgs {
    /// MoJo direction: symmetric, forward or backward.
    #[arg(long, default_value = "symmetric")]
    mojo_mode: String,
    /// Worker threads for candidate scoring.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args, Serialize)]
struct NegotiateArgs {
    /// Edge list of the current version.
    #[arg(long)]
    edges: PathBuf,
    /// Previous decomposition. Modules missing from it are seeded from their
    /// dependencies; modules absent from the graph are ignored.
    #[arg(long)]
    previous: PathBuf,
    #[arg(long)]
    tau_sta: f64,
    #[arg(long)]
    tau_coh: f64,
    /// Output prefix.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    previous: PathBuf,
    /// Comma-separated stability budgets.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    tau_sta: Vec<f64>,
    #[arg(long)]
    tau_coh: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write a comparison table including the hill-climbing baseline.
    #[arg(long)]
    with_baseline: bool,
    /// Write one trace CSV per budget.
    #[arg(long)]
    traces: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Debug, Args, Serialize)]
struct BaselineArgs {
    #[arg(long)]
    edges: PathBuf,
    /// Starting decomposition; stability in the trace is measured against it.
    #[arg(long)]
    start: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = amcp::baseline::DEFAULT_MAX_STEPS)]
    max_steps: usize,
    #[arg(long, default_value = "symmetric")]
    mojo_mode: String,
}

#[derive(Debug, Args, Serialize)]
struct MojoArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "symmetric")]
    mode: String,
}

#[derive(Debug, Args, Serialize)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    blocks: usize,
    #[arg(long)]
    p_in: f64,
    #[arg(long)]
    p_out: f64,
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// A failed run, split by who is at fault.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Extract(a) => commands::extract(a, &cli.command),
        Command::Negotiate(a) => commands::negotiate(a, &cli.command),
        Command::Sweep(a) => commands::sweep(a, &cli.command),
        Command::Baseline(a) => commands::baseline(a, &cli.command),
        Command::Mojo(a) => commands::mojo(a),
        Command::Gen(a) => commands::gen(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
