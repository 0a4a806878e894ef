//! Experiment runner behind the `condexp` binary.

pub mod config;
pub mod reference;
pub mod report;
pub mod reproduce;
pub mod runner;

pub use config::{ExperimentConfig, Format, RegressorConfig};
pub use report::{ReportRow, RowContext};
pub use reproduce::{reproduce_table, ScaleOverrides};
pub use runner::{run, RunOutput};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            CliError::Config(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<condexp::Error> for CliError {
    fn from(e: condexp::Error) -> Self {
        match e {
            condexp::Error::Config(msg) => CliError::Config(msg),
            e @ (condexp::Error::Domain(_) | condexp::Error::Shape { .. }) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
