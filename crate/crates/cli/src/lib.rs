//! Command-line front end: config ingestion, subcommand dispatch, output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome};
pub use config::{ConfigError, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SHORTFALL: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;
pub const EXIT_THEOREM_FAILURE: i32 = 4;

const CONFIG_HELP: &str = "\
CONFIG FILE (TOML, unknown keys are errors)
  [cable]      density, tension, length           (required except for verify)
  [[loads]]    mass, position                     (0 < position < length, increasing)
  [motion]     mode = static | loads-moving | system-moving   (static)
               speed (0), coriolis (true), length_rate (0)
               factor_mode = normalized | as-printed           (normalized)
               frequency_formula = corrected | as-printed      (corrected)
  [solve]      count (3), lambda_max (2 (count + 1) pi / length), oversample (16),
               tol_rel (1e-12), max_iter (200)
  [window]     t0, t1, steps                      (steps = number of instants)
  [oracle]     nodes (2000), threshold (5e-3)
  [output]     format = table | csv, path         (stdout)
  [sweep]      param = speed | mass:<i> | position:<i>, from, to, steps
  [verify]     seed (1), trials (50)

Load indices are 0-based. Default output format is a table for spectrum,
oracle and verify, and CSV for sweep and moving.

EXIT CODES
  0 ok, 1 config error, 2 root-search shortfall, 3 oracle mismatch,
  4 theorem failure";

#[derive(Debug, Parser)]
#[command(
    name = "cableway",
    version,
    about = "Eigenvalues and natural frequencies of a taut cable carrying point loads",
    after_long_help = CONFIG_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First `count` eigenvalues and frequencies (loads-moving and system modes use window.t0).
    Spectrum(Common),
    /// Eigenvalues over a grid of one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// speed, mass:<i> or position:<i>
        #[arg(long)]
        param: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        /// Number of grid points, endpoints included.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Eigenvalues at every instant of the time window.
    Moving {
        #[command(flatten)]
        common: Common,
        /// Overrides window.t0.
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        /// Overrides window.t1.
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        /// Overrides window.steps.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Transfer-method eigenvalues against the finite-difference oracle.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Overrides oracle.nodes.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Randomized checks of the spectral theorems.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: Option<FaultName>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultName {
    InterfaceSign,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Spectrum(common) => common,
            Command::Sweep { common, .. }
            | Command::Moving { common, .. }
            | Command::Oracle { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}
