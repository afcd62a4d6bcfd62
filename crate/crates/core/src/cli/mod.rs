//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 verification failure.

mod commands;
pub mod files;
pub mod scan;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::model::TemperatureParams;

pub use scan::{scan_row, ScanRow, SCAN_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sosgibbs",
    version,
    about = "Periodic boundary laws and gradient Gibbs measures of the SOS model on Cayley trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one of `--tau`, `--beta`, `--theta`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct TemperatureArgs {
    /// tau = 2 cosh(beta), must exceed 2
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// inverse temperature, must be positive
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// theta = exp(-beta), in (0, 1)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

impl TemperatureArgs {
    pub fn resolve(&self) -> Result<TemperatureParams, Error> {
        match (self.tau, self.beta, self.theta) {
            (Some(t), None, None) => TemperatureParams::from_tau(t),
            (None, Some(b), None) => TemperatureParams::from_beta(b),
            (None, None, Some(t)) => TemperatureParams::from_theta(t),
            _ => Err(Error::Domain(
                "give exactly one of --tau, --beta, --theta".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Period {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    Generic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Periodic solutions of the boundary-law equation
    Solve {
        #[arg(long, value_enum)]
        period: Period,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// period for --period generic
        #[arg(long)]
        q: Option<usize>,
        /// starting values u_1, ..., u_(q-1) for --period generic
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// CSV table of solutions and counts over a tau grid
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        tau_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        tau_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        step: f64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Check a law file against the boundary-law equation
    Verify {
        #[arg(long)]
        law: PathBuf,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long)]
        json: bool,
    },
    /// Marginals of the gradient measure on a subtree
    Marginal {
        #[arg(long)]
        law: PathBuf,
        /// tree file; the single-bond volume when omitted
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        temperature: TemperatureArgs,
        /// probability of the configuration in this file
        #[arg(long, conflicts_with = "bond")]
        config: Option<PathBuf>,
        /// restrict the per-bond table to this bond index
        #[arg(long)]
        bond: Option<usize>,
        #[arg(long, default_value_t = 10)]
        window: u32,
        #[arg(long)]
        json: bool,
    },
    /// Distinct gradient Gibbs measures among the solved families
    Classify {
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact samples of the window-restricted marginal
    Sample {
        #[arg(long)]
        law: PathBuf,
        /// tree file; the single-bond volume when omitted
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        window: u32,
    },
}

/// Failure of a command, with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VERIFICATION,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ClassificationConflict(_)
            | Error::Convergence { .. }
            | Error::SideSeriesMismatch(_) => CliError::verification(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

/// Standard output of a finished command and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            code: EXIT_OK,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve {
            period,
            temperature,
            k,
            q,
            seeds,
            json,
        } => commands::solve(period, &temperature, k, q, &seeds, json),
        Command::Scan {
            tau_min,
            tau_max,
            step,
            k,
        } => commands::scan(tau_min, tau_max, step, k),
        Command::Verify {
            law,
            temperature,
            json,
        } => commands::verify(&law, &temperature, json),
        Command::Marginal {
            law,
            tree,
            temperature,
            config,
            bond,
            window,
            json,
        } => commands::marginal(
            &law,
            tree.as_deref(),
            &temperature,
            config.as_deref(),
            bond,
            window,
            json,
        ),
        Command::Classify {
            temperature,
            k,
            json,
        } => commands::classify(&temperature, k, json),
        Command::Sample {
            law,
            tree,
            temperature,
            seed,
            n,
            window,
        } => commands::sample(&law, tree.as_deref(), &temperature, seed, n, window),
    }
}
