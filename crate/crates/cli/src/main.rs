mod cache;
mod commands;
mod session;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use m0n_core::{Budget, OrderConvention};

use crate::cache::TableCache;

#[derive(Parser, Debug)]
#[command(name = "m0n", version, about = "Exact computations in the Chow ring of M_{0,n}")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    /// Number of marked points.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long = "order-convention", value_parser = parse_convention, default_value = "asc", global = true)]
    pub order_convention: OrderConvention,
    /// Directory for cached reduction tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Wall-clock limit; exceeding it exits with status 3.
    #[arg(long, global = true)]
    pub budget_seconds: Option<u64>,
    /// Polynomial or monomial in text form, e.g. `a1*D{1,2,3}^2 - a2`.
    #[arg(long, global = true)]
    pub expr: Option<String>,
    /// JSON polynomial document; `-` reads standard input.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Standard monomials of one degree, or of every degree.
    Basis,
    /// Duals of a standard monomial or of a whole basis.
    Dual,
    /// Normal form of a polynomial.
    Reduce,
    /// Degree of a top-degree class.
    Integral,
    /// Pairing matrix between degree d and its complement.
    Pair,
    /// The defining relations.
    Relations,
    /// Ranks of the graded pieces.
    Rank,
    /// Ranks and torsion recomputed from scratch.
    Oracle,
    /// Runs every certification for the given n.
    Verify,
    /// Forest, bounds, dual and filtration of a monomial.
    Explain,
}

fn parse_convention(s: &str) -> Result<OrderConvention, String> {
    OrderConvention::parse(s).ok_or_else(|| format!("expected `asc` or `desc`, got `{s}`"))
}

/// Invalid input discovered after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A certification failed; the report has already been written.
#[derive(Debug)]
pub struct CertificationFailed(pub String);

impl std::fmt::Display for CertificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "certification failed: {}", self.0)
    }
}

impl std::error::Error for CertificationFailed {}

fn exit_code(e: &anyhow::Error) -> u8 {
    use m0n_core::Error as E;
    if e.is::<CertificationFailed>() {
        return 1;
    }
    if e.is::<UsageError>() || e.is::<serde_json::Error>() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(E::BudgetExceeded(_)) => 3,
        Some(E::Certification { .. } | E::Overflow) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.opts.budget_seconds.map_or_else(Budget::unlimited, Budget::seconds);
    let cache = match &cli.opts.cache_dir {
        Some(dir) => TableCache::open(dir),
        None => TableCache::disabled(),
    };
    let mut out = std::io::stdout().lock();
    match commands::run(cli.command, &cli.opts, cache, budget, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            if !e.is::<CertificationFailed>() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
