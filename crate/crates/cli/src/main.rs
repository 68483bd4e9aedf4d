//! `ehrenfest` command-line driver.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage or configuration
//! error, 3 rate not on the model grid, 4 I/O error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Format;
use ehrenfest_core::experiments::Scenario;
use ehrenfest_core::pricing::IntensityConvention;

#[derive(Debug, Parser)]
#[command(
    name = "ehrenfest",
    version,
    about = "Zero-coupon bond pricing and simulation in the Ehrenfest short-rate model",
    after_help = "All rates are decimals: 0.05 means five percent.\n\
                  Command-line flags override values from the --config file."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Random seed for simulation and Monte Carlo
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,

    /// Output file (directory for `lowrate`); standard output when omitted where supported
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Round off-grid rates to the nearest grid point instead of failing
    #[arg(long, global = true)]
    pub snap: bool,

    /// Independent check of the series price
    #[arg(long, global = true, value_enum, default_value_t = Oracle::None)]
    pub oracle: Oracle,

    /// Outer series truncation order
    #[arg(long = "M", global = true, value_name = "INT")]
    pub outer: Option<u32>,

    /// Hypergeometric truncation order (maximal partition weight)
    #[arg(long = "H", global = true, value_name = "INT")]
    pub hyper: Option<u32>,

    /// Per-ball intensity used when mapping Vasicek parameters onto the chain
    #[arg(long, global = true, value_enum, default_value_t = Intensity::MomentMatched)]
    pub intensity: Intensity,

    /// Report wall_time_s as 0 so repeated runs produce identical output
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    None,
    /// Feynman-Kac expectation on the finite chain
    Fk,
    /// Monte Carlo over exactly simulated paths
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Intensity {
    /// lambda = k / 2, so the rate mean relaxes at the Vasicek speed k
    MomentMatched,
    /// lambda = alpha / (alpha + beta) = 1/2
    Literal,
}

impl From<Intensity> for IntensityConvention {
    fn from(value: Intensity) -> Self {
        match value {
            Intensity::MomentMatched => IntensityConvention::MomentMatched,
            Intensity::Literal => IntensityConvention::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Favourable,
    Unfavourable,
}

impl From<ScenarioArg> for Scenario {
    fn from(value: ScenarioArg) -> Self {
        match value {
            ScenarioArg::Favourable => Scenario::Favourable,
            ScenarioArg::Unfavourable => Scenario::Unfavourable,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price a zero-coupon bond and print the result
    Price(PriceArgs),
    /// Simulate short-rate paths and write them as CSV or JSON
    Simulate(SimulateArgs),
    /// Sweep N for a Vasicek scenario and compare bond prices
    Converge(ConvergeArgs),
    /// Run the low-rate comparison and write price curves and sample paths
    Lowrate,
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    /// Valuation time in years
    #[arg(long = "t", value_name = "YEARS")]
    pub t: Option<f64>,
    /// Maturity in years
    #[arg(long = "T", value_name = "YEARS")]
    pub maturity: Option<f64>,
    /// Short rate at the valuation time, as a decimal
    #[arg(long = "r", value_name = "RATE", allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Number of Monte Carlo paths for --oracle mc
    #[arg(long, value_name = "INT")]
    pub paths: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Simulation horizon in years
    #[arg(long, value_name = "YEARS")]
    pub horizon: Option<f64>,
    /// Number of paths
    #[arg(long, value_name = "INT")]
    pub paths: Option<u64>,
    /// Starting rate, as a decimal
    #[arg(long, value_name = "RATE", allow_negative_numbers = true)]
    pub r0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Vasicek parameter set
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    /// Comma-separated list of N values
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    pub ns: Option<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
