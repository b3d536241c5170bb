// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every command writes one CSV table plus a
//! `.manifest.json` describing how it was produced.
//!
//! Exit codes: 0 on success, 2 on parameter errors, 3 when a numerical
//! quality check fails (truncation not converged, degenerate MC batch).

mod commands;
mod grid;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{read_table_columns, CommandOutcome};
pub use grid::parse_grid;
pub use output::{fmt_f64, manifest_path, RunManifest, OUTPUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "bandcorr",
    version,
    about = "Characteristic polynomial correlations of block band matrices"
)]
pub struct Cli {
    /// Override the number of radial quadrature nodes.
    #[arg(long = "quadrature-order", global = true)]
    pub quadrature_order: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Localized,
    Critical,
    Delocalized,
    Finite,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Theoretical limit curve over a ξ grid.
    Limit(LimitArgs),
    /// Transfer-operator eigenvalues and the ν̂ / Laplace data of the basis.
    Spectrum(SpectrumArgs),
    /// Monte Carlo estimate of the normalized second moment.
    Mc(McArgs),
    /// Join an MC table with a theory table on ξ.
    Compare(CompareArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(value_enum)]
    pub regime: RegimeArg,
    /// ξ grid as min:max:count, a comma list or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long = "E", default_value_t = 0.0, allow_hyphen_values = true)]
    pub energy: f64,
    /// C* for the critical regime.
    #[arg(long = "Cstar")]
    pub c_star: Option<f64>,
    /// C_* = n/W for the critical regime; converted with C* = C_*/t*(E).
    #[arg(long = "Csub", conflicts_with = "c_star")]
    pub c_sub: Option<f64>,
    /// Truncation order of the operator regimes.
    #[arg(long = "l", default_value_t = crate::limits::DEFAULT_ORDER)]
    pub order: usize,
    /// Number of blocks (finite regime).
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Block size (finite regime).
    #[arg(long = "W")]
    pub w: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "l")]
    pub order: usize,
    /// Comma separated list of p = W t values.
    #[arg(
        long = "p",
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub p: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long = "W")]
    pub w: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long = "E", allow_hyphen_values = true)]
    pub energy: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long)]
    pub samples: usize,
    /// Required: every published number must be reproducible.
    #[arg(long)]
    pub seed: u64,
    /// Worker threads (0 = all available).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value_t = crate::mc::DEFAULT_BATCHES)]
    pub batches: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// CSV from `mc` (or any table with xi and ratio/value columns).
    pub mc_csv: PathBuf,
    /// CSV from `limit`.
    pub limit_csv: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let argv: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match commands::execute(&cli, argv) {
        Ok(outcome) => {
            for p in &outcome.outputs {
                eprintln!("wrote {}", p.display());
            }
            if let Some(err) = outcome.quality_failure {
                eprintln!("error: {err}");
                err.exit_code()
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
