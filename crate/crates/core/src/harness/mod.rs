//! Multi-seed experiments, cost-aligned aggregation, CSV output and the
//! command line front end.

mod aggregate;
mod cli;
mod config;
mod csv_out;
mod experiment;

pub use aggregate::{aggregate, aggregate_arm, cost_grid, percentile, AggregateStats, ArmStats, CheckpointRow};
pub use cli::{cli_main, cli_run};
pub use config::{ArmConfig, EnvironmentSpec, EvaluationSpec, ExperimentConfig, RunConfig, ScheduleSpec};
pub use csv_out::{emit_csv, parse_csv, round_sig, trace_csv, write_csv};
pub use experiment::{run_experiment, run_single, ArmResult, ExperimentResult, PreparedEnvironment};

use std::path::PathBuf;

use thiserror::Error;

use crate::learner::LearnError;
use crate::mdp::MdpError;
use crate::schedules::ScheduleError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
    #[error("cannot parse {what}: {message}")]
    Parse { what: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("arms are not aligned: {0}")]
    Alignment(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}
