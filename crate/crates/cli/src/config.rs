use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use qcasc_cascade::generate::Family;
use qcasc_parallel::Pass;
use qcasc_verify::Mode;

#[derive(Parser, Debug, Clone)]
#[command(name = "qcasc", version, about = "Compile control cascades into low-depth circuits")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a seeded cascade as JSON.
    Gen(GenArgs),
    /// Compile a cascade and print its cost report.
    Compile(CompileArgs),
    /// Compare two circuits (or cascades) on their data registers.
    Verify(VerifyArgs),
    /// Tabulate compiled depth against m as CSV.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Staircase of one-qubit gates.
    Mn,
    /// Cascade of k-qubit multiplexers.
    Cascade,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    /// One basis gate per line with its matrix entries.
    Text,
}

/// Where the input program comes from: a file or a generator spec.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Cascade JSON file.
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["kind", "m"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Qubits per block body (cascades only).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value = "haar")]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value = "mn-log")]
    pub pass: Pass,
    /// Group size of the staircase recursion.
    #[arg(long, default_value_t = qcasc_parallel::DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    /// Target accuracy; required by, and only by, the load pass.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Place the staircase on a 2D nearest-neighbour grid.
    #[arg(long)]
    pub grid: bool,
    /// Check the result against the naive lowering and record the distance.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Basis circuit output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Also write the report here.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Write the block-level circuit (P, D or Q, R gates) here.
    #[arg(long, value_name = "FILE")]
    pub dump_parts: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Two circuit or cascade JSON files (`--in A --in B` or `--in A B`).
    #[arg(long = "in", value_name = "FILE", num_args = 1..=2, action = ArgAction::Append, required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "exact")]
    pub mode: Mode,
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    pub tolerance: f64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(long, default_value = "mn-log")]
    pub pass: Pass,
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64])]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1])]
    pub k: Vec<usize>,
    #[arg(long, default_value = "haar")]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = qcasc_parallel::DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
