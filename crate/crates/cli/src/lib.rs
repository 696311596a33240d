//! Batch driver behind the `fracmal` binary.
//!
//! Each subcommand takes a validated [`Scenario`], runs one solve or analysis
//! per fractional order, and writes one file per order.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_analyze, cmd_phase, cmd_simulate, run_sweep};
pub use config::{load_config, Scenario, ScenarioConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{}at `{path}` (line {line}, column {column}): {message}", file.as_ref().map(|f| format!("{}: ", f.display())).unwrap_or_default())]
    Parse {
        file: Option<PathBuf>,
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    /// 1 for usage, config and I/O problems, 2 when a solve or analysis fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn in_file(self, p: &Path) -> Self {
        match self {
            CliError::Parse {
                path,
                line,
                column,
                message,
                ..
            } => CliError::Parse {
                file: Some(p.to_path_buf()),
                path,
                line,
                column,
                message,
            },
            other => other,
        }
    }
}
