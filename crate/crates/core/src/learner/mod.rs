//! Stochastic learning engines.
//!
//! Every run owns one RNG. Each inner step draws the state-action pair
//! first and the reward second, so a `(config, seed)` pair reproduces a
//! trace bit for bit.

mod engine;
mod exploration;
mod trace;
mod tracker;

pub use engine::{
    inner_sgd_step, run_atql, run_exact_outer, run_icql, run_inner_loop, run_inner_loop_observed, run_periodic_q,
    run_schedule, Evaluation, InnerStep, RunContext,
};
pub use exploration::{ExplorationPolicy, PairSampler};
pub use trace::{CycleRecord, InnerSummary, RunTrace, StopReason};
pub use tracker::TdErrorTracker;

use thiserror::Error;

use crate::mdp::MdpError;
use crate::schedules::ScheduleError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnError {
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("{0}")]
    Domain(String),
    #[error("run has no stopping rule: give a finite schedule, a cycle limit or a sample budget")]
    Unbounded,
}
