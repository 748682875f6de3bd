use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kernelforge::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "kernelforge", version, about = "Reproducing kernels, sigma constants and norm expansions")]
pub struct Cli {
    /// Report format written to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Run sequentially instead of on the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    Bidisk,
    Ball,
    Fock,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Bidisk => "bidisk",
            SpaceKind::Ball => "ball",
            SpaceKind::Fock => "fock",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the reproducing kernel at (z, w) pairs.
    Kernel(KernelArgs),
    /// Decompose the squared norm of a polynomial by vanishing order.
    NormExpand(NormArgs),
    /// Normalising constant of the weight.
    Sigma(SpaceArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceKind,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Bidisk only.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub vartheta: f64,
    /// Series truncation tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Compare against the Gram-matrix oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Highest polynomial degree of the oracle's Gram blocks.
    #[arg(long, default_value_t = 16)]
    pub oracle_degree: usize,
    /// JSON file caching the Gram blocks between runs.
    #[arg(long)]
    pub gram_cache: Option<PathBuf>,
    /// Absolute accuracy of quadrature-based Gram entries.
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// z1,z2,w1,w2 as four reals or as eight numbers re,im,re,im,…; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub pair: Vec<String>,
    /// File with one pair per line in the `--pair` format.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Relative tolerance of each oracle comparison.
    #[arg(long, default_value_t = 1e-6)]
    pub oracle_tol: f64,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Polynomial such as "z1 - z2" or "(1+2i)*z1^2*z2".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// File holding the polynomial as text or as JSON [[m, n, re, im], …].
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Relative tolerance of the oracle comparison of the total.
    #[arg(long, default_value_t = 1e-9)]
    pub oracle_tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name.
    #[arg(value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: kernelforge::Error| e.to_string())
}
