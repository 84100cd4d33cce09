//! Experiment runner and file formats for the modular-metric core.
//!
//! Configuration-driven experiments bind the library operations to JSON
//! reports and CSV tables; fixtures are generated deterministically from a
//! seed, so equal (config, seed) pairs produce byte-identical reports.

use std::fmt;

pub mod config;
pub mod experiments;
pub mod fixtures;
pub mod io;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{generate, run, GenerateOptions, RunOptions};

/// Usage and IO failures map to exit code 1; verdicts map to 0/2/3 inside
/// the experiment runner.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(modmet_core::CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<modmet_core::CoreError> for CliError {
    fn from(e: modmet_core::CoreError) -> Self {
        CliError::Core(e)
    }
}
