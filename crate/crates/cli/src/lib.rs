//! Batch front end: reads a run configuration, builds the matrix family and
//! writes CSV tables for coefficient extraction, spectrum comparison,
//! distribution diagnostics and the G-norm counterexample.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O.

pub mod config;
pub mod import;
pub mod output;
pub mod run;

use std::path::PathBuf;

pub use config::{load_config, parse_config, Command, RunConfig};
pub use import::{import_matrix, parse_matrix, ImportError};
pub use output::{format_number, CsvTable};
pub use run::run;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {message}", path.display())]
    Read { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key `{key}`")]
    Missing { key: &'static str },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    Invalid {
        key: String,
        line: usize,
        message: String,
    },
    #[error("line {line}: `{key}` violates a constraint: {message}")]
    Constraint {
        key: String,
        line: usize,
        message: String,
    },
    #[error("command `{command}` needs a truth symbol; add a [truth] section")]
    NeedsTruth { command: &'static str },
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(#[from] glt_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(ConfigError::Read { .. }) | RunError::Io { .. } => 4,
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}
