//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rwa_core::distributions::SpacingsMethod;
use rwa_core::HalfInteger;

#[derive(Debug, Parser)]
#[command(
    name = "rwa",
    version,
    about = "Exact and Monte Carlo checks of randomly weighted arcsine averages"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of exact even moments: closed form next to the composition sum.
    Moment {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        k_max: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value_t = crate::Format::Table)]
        format: crate::Format,
    },
    /// Checks the multinomial-Dirichlet rising-factorial identity.
    LemmaCheck {
        /// Comma-separated half-integers, e.g. `1/2,1,3/2`.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_half_integer)]
        params: Vec<HalfInteger>,
        #[arg(long, default_value_t = 8)]
        r_max: u32,
        #[arg(long, value_enum, default_value_t = crate::Format::Table)]
        format: crate::Format,
    },
    /// Writes seeded draws as CSV.
    Sample {
        #[command(subcommand)]
        source: SampleCommand,
    },
    /// Samples S_n and tests it against the power semicircle law.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        /// JSON report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Test the sample against the wrong null λ (power check).
        #[arg(long, hide = true)]
        lambda_override: Option<f64>,
    },
    /// Histogram of S_n next to the theoretical density, as CSV.
    PlotData {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Defaults to the Rice rule, ceil(2 N^(1/3)).
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SampleOpts {
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SampleCommand {
    Arcsine {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        opts: SampleOpts,
    },
    Psc {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        opts: SampleOpts,
    },
    Rwa {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Also write a JSON provenance envelope here.
        #[arg(long)]
        envelope: Option<PathBuf>,
        #[command(flatten)]
        opts: SampleOpts,
    },
    Spacings {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::OrderStatistics)]
        method: MethodArg,
        #[command(flatten)]
        opts: SampleOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    OrderStatistics,
    Exponentials,
}

impl From<MethodArg> for SpacingsMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::OrderStatistics => SpacingsMethod::OrderStatistics,
            MethodArg::Exponentials => SpacingsMethod::Exponentials,
        }
    }
}

fn parse_half_integer(s: &str) -> Result<HalfInteger, String> {
    s.parse::<HalfInteger>().map_err(|e| e.to_string())
}
