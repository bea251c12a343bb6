//! Configuration-driven experiments and reports on top of `cesaro-core`.

pub mod config;
pub mod output;
pub mod reproduce;
pub mod runner;

pub use config::{ExperimentConfig, GridSpec, Task};
pub use output::{run, write_outputs, Report, RunResult};
pub use runner::{execute, Finding, RunOptions, Status, TaskOutput};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config field `{field}`: {reason}")]
    Usage { field: String, reason: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}
