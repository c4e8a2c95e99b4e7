use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod commands;
mod input;
mod output;
mod selftest;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Exact, approximate and k-approximated text-to-pattern distances.
#[derive(Debug, Parser)]
#[command(name = "l1match", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distance at every alignment.
    Exact(RunArgs),
    /// (1 ± ε)-approximate L1 distance.
    Approx(RunArgs),
    /// Exact L1 distance where it is at most k, `inf` elsewhere.
    Kapprox(RunArgs),
    /// Write a random (optionally periodic) sequence.
    Gen(GenArgs),
    /// Time one operation and report its work counters as JSON.
    Bench(bench::BenchArgs),
    /// Compare every algorithm against brute force on small random inputs.
    Selftest(selftest::SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    L1,
    Ham,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Whitespace-separated signed integers.
    #[arg(long)]
    text: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::L1)]
    metric: MetricArg,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override the number of independent estimator runs.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also run the brute-force oracle and fail (exit 3) on disagreement.
    #[arg(long)]
    oracle_check: bool,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    length: usize,
    /// Symbols are drawn from `0..alphabet`.
    #[arg(long)]
    alphabet: u64,
    #[arg(long)]
    period: Option<usize>,
    /// Number of positions overwritten with fresh random symbols.
    #[arg(long, default_value_t = 0)]
    corruption: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Constraint(String),
    #[error("oracle check failed: {0}")]
    Oracle(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Constraint(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }
}

impl From<l1match_core::Error> for Failure {
    fn from(e: l1match_core::Error) -> Self {
        Failure::Constraint(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("L1MATCH_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::Parse(format!(
                "L1MATCH_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Constraint(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Exact(args) => commands::exact(&args),
        Command::Approx(args) => commands::approx(&args),
        Command::Kapprox(args) => commands::kapprox(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Selftest(args) => selftest::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
