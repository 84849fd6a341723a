//! `itc`: information transfer capacity on XX spin chains.
//!
//! Every run is determined by its flags alone. Spins are numbered from 1;
//! doubly-infinite positions (`asymptotic --frame doubly`) are measured from
//! the center and may be negative.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical cross-check failure,
//! 4 eigensolver convergence failure.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itc_core::ItcError;
use serde::Serialize;

use crate::output::{Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "itc",
    version,
    about = "Information transfer capacity on XX spin chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// √p_max for a pair, selected rows, or the whole chain
    Pmax(SelectArgs),
    /// ITC distance d = −log p_max for a pair, selected rows, or the whole chain
    Distance(SelectArgs),
    /// Anti-core check, inertia maximum and diameter
    Anticore(AnticoreArgs),
    /// Infinite-chain √p_max: series, closed form and certified tail
    Asymptotic(AsymptoticArgs),
    /// Sweep the center bias ζ
    Sweep(SweepArgs),
    /// Four-point δ (diagnostic), triangle audit and diameter
    Hyperbolicity(HyperbolicityArgs),
    /// p_t(i,j) over a time grid next to p_max(i,j)
    Evolve(EvolveArgs),
    /// Constants of the infinite-chain limits
    Constants(OutputArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainArgs {
    /// Number of spins N
    #[arg(long)]
    pub n: usize,
    /// Potential ζ on the center spin (odd N only)
    #[arg(long, default_value_t = 0.0)]
    pub bias: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Emit one column per selected row i (repeatable)
    #[arg(long, conflicts_with = "pair")]
    pub row: Vec<usize>,
    /// Emit a single pair I J
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub pair: Option<Vec<usize>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnticoreArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Inertia exponent α
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameArg {
    Semi,
    Doubly,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsymptoticArgs {
    /// Semi-infinite (positions ≥ 1 from the end) or doubly-infinite
    /// (positions relative to the center, may be negative or 0)
    #[arg(long, value_enum)]
    pub frame: FrameArg,
    #[arg(long, allow_negative_numbers = true)]
    pub i: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub j: i64,
    /// Series truncation tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Number of spins N (odd)
    #[arg(long)]
    pub n: usize,
    /// Ascending bias grid
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000,10000")]
    pub zeta: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HyperbolicityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Exhaustive scan when C(N,4) fits, otherwise this many sampled quadruples
    #[arg(long, default_value_t = itc_core::geometry::DEFAULT_QUADRUPLE_BUDGET)]
    pub budget: u64,
    /// Seed for quadruple sampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub j: usize,
    /// Last time on the grid
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Grid spacing
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Pmax(a) | Command::Distance(a) => &a.output,
            Command::Anticore(a) => &a.output,
            Command::Asymptotic(a) => &a.output,
            Command::Sweep(a) => &a.output,
            Command::Hyperbolicity(a) => &a.output,
            Command::Evolve(a) => &a.output,
            Command::Constants(a) => a,
        }
    }
}

/// A failed run: message for standard error plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Output produced before a cross-check failed, still worth writing.
    pub partial: Option<Table>,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CROSS_CHECK: u8 = 3;
pub const EXIT_CONVERGENCE: u8 = 4;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            partial: None,
        }
    }

    pub fn cross_check(message: impl Into<String>, partial: Table) -> Self {
        Failure {
            code: EXIT_CROSS_CHECK,
            message: message.into(),
            partial: Some(partial),
        }
    }
}

impl From<ItcError> for Failure {
    fn from(e: ItcError) -> Self {
        let code = match e {
            ItcError::InvalidChain(_)
            | ItcError::IndexOutOfRange { .. }
            | ItcError::InvalidArgument(_) => EXIT_USAGE,
            ItcError::ProbabilityExcess { .. } | ItcError::CrossCheck(_) => EXIT_CROSS_CHECK,
            ItcError::NotConverged { .. } => EXIT_CONVERGENCE,
        };
        Failure {
            code,
            message: e.to_string(),
            partial: None,
        }
    }
}

fn emit(command: &Command, table: &Table) -> io::Result<()> {
    let out = command.output();
    let sink: Box<dyn Write> = match &out.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match out.format {
        Format::Csv => table.write_csv(&mut sink).map_err(io::Error::other)?,
        Format::Json => {
            let config = serde_json::to_value(command).map_err(io::Error::other)?;
            serde_json::to_writer(&mut sink, &table.to_json(config))?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (table, failure) = match commands::run(&cli.command) {
        Ok(table) => (Some(table), None),
        Err(mut f) => (f.partial.take(), Some(f)),
    };
    if let Some(table) = table {
        if let Err(e) = emit(&cli.command, &table) {
            eprintln!("error: could not write output: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
