//! `ctpgas`: CSV/JSON front end for the `idealgas-ctp` numerics.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{ConfigLayer, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Numeric {
        context: String,
        source: idealgas_ctp::Error,
    },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn numeric(context: impl Into<String>, source: idealgas_ctp::Error) -> Self {
        CliError::Numeric {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn other(e: impl std::fmt::Display) -> Self {
        CliError::Other(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Numeric { .. } => exit::NUMERIC,
            CliError::Io { .. } | CliError::Other(_) => 1,
        }
    }
}

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const NUMERIC: i32 = 3;
    /// Outputs were written but some grid nodes failed.
    pub const PARTIAL: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "ctpgas",
    version,
    about = "Closed-time-path response of an ideal quantum gas"
)]
pub struct Cli {
    /// Flat TOML file with any of the flag names (snake_case) as keys
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub flags: ConfigLayer,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// L, R+, R- and G^r at q_values × z_values
    Response {
        /// Also write the Monte-Carlo cross-check of R+ and R-
        #[arg(long)]
        monte_carlo: bool,
    },
    /// Bare-action kernels at q_values × z_values
    Kernels,
    /// D^tt and D^T on the (Q, z) grid
    Grid,
    /// D^tt and D^T along z = Q/2
    Ridge,
    /// Hydrodynamic coefficients from the small-(Q, z) response
    Hydrofit,
    /// Static flow profile of a Gaussian source
    Staticflow,
    /// Grid, ridge and metadata for the figures
    FiguresData,
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Number of grid or ridge nodes that failed.
    pub defects: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.defects > 0 {
            exit::PARTIAL
        } else {
            exit::SUCCESS
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let env_out = std::env::var_os(config::OUT_DIR_ENV).map(PathBuf::from);
    let config = RunConfig::resolve(cli.config.as_deref(), &cli.flags, env_out)?;
    commands::execute(&config, cli.command)
}
