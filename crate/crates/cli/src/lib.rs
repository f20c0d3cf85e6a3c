//! Batch front-end for the emdec solvers: configuration parsing, runs,
//! mesh validation and offline spectra.

pub mod config;
pub mod expr;
pub mod runner;
pub mod spectrum_cmd;
pub mod validate;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Environment variable that overrides every output directory.
pub const OUTPUT_DIR_ENV: &str = "EMDEC_OUTPUT_DIR";
