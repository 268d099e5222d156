use std::path::PathBuf;

use ave_core::Algorithm;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ave", version, about = "Fixed-point solvers for Ax - |x| = b")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solver and report IT, time and final residual.
    Solve(SolveArgs),
    /// Evaluate the four sufficient convergence conditions.
    Check(CheckArgs),
    /// Run solvers over a grid of relaxation parameters.
    Sweep(SweepArgs),
    /// Reproduce the fixed four-algorithm comparison on the n = 400 benchmark.
    #[command(name = "bench-table1")]
    BenchTable1(BenchArgs),
    /// Enumerate all solutions of a small instance by sign patterns.
    Oracle(OracleArgs),
    /// Write a generated problem to a bundle directory.
    Generate(GenerateArgs),
}

/// Exactly one of these selects the problem.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// Block-tridiagonal family, keys `m` (default 20) and `mu` (default 4).
    #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
    pub example1: Option<Vec<String>>,
    /// Block lower-bidiagonal family, keys `m` (default 20) and `theta` (default 4).
    #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
    pub example2: Option<Vec<String>>,
    /// Tridiagonal Toeplitz matrix, keys `n`, `sub`, `diag`, `super`.
    #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
    pub tridiag: Option<Vec<String>>,
    /// Seeded diagonally dominant instance, keys `n`, `seed`, `dominance`.
    #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
    pub random: Option<Vec<String>>,
    /// Matrix file (`n m` header, then rows).
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
    /// Right-hand side vector file, used with `--matrix`.
    #[arg(long, value_name = "PATH")]
    pub rhs: Option<PathBuf>,
    /// Problem bundle directory written by `generate`.
    #[arg(long, value_name = "DIR")]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IterationArgs {
    /// Relative residual tolerance.
    #[arg(long, default_value_t = ave_core::solvers::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = ave_core::solvers::DEFAULT_K_MAX)]
    pub kmax: usize,
    /// Use the unnormalised residual (needed when b = 0).
    #[arg(long)]
    pub absolute_residual: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_name = "1|2|3|4")]
    pub alg: Algorithm,
    #[arg(long)]
    pub lambda: f64,
    /// `identity`, `dA-inv`, `nA-inv` or `diag:<path>`.
    #[arg(long = "E", value_name = "TOKEN")]
    pub e: String,
    #[command(flatten)]
    pub iteration: IterationArgs,
    /// Starting vector file; zero when omitted.
    #[arg(long, value_name = "PATH")]
    pub x0: Option<PathBuf>,
    /// Directory for summary.json, history.csv and final_x.txt.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long = "E", value_name = "TOKEN")]
    pub e: String,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// One or more algorithms, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true, value_name = "1|2|3|4")]
    pub alg: Vec<Algorithm>,
    /// `start:step:end`, endpoints inclusive.
    #[arg(long, value_name = "START:STEP:END")]
    pub grid: String,
    #[arg(long = "E", value_name = "TOKEN")]
    pub e: String,
    #[command(flatten)]
    pub iteration: IterationArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory for table1.csv and table1.txt.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}
