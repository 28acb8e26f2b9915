//! Tabular Q-learning with frozen Bellman targets.
//!
//! Periodic Q-learning is treated as a nested scheme: an outer loop of inexact
//! value iteration whose steps are each approximated by an inner loop of
//! asynchronous SGD against a frozen target table. The crate provides
//!
//! - [`mdp`]: finite MDPs, the exact Bellman optimality operator, a value
//!   iteration oracle and the stochastic 4x4 GridWorld benchmark;
//! - [`schedules`]: target-update-frequency (TUF) and step-size schedules,
//!   the inner-loop rate constants, and the quasi-optimal fixed / geometric
//!   schedule designers with their cost and error-bound accounting;
//! - [`learner`]: the inner SGD loop and the outer algorithms (periodic
//!   Q-learning, increasing-cycle ICQL, accuracy-triggered ATQL);
//! - [`harness`]: multi-seed experiments, cost-aligned aggregation, CSV output
//!   and the command line front end.

// NaN must fail range checks, so `!(x > 0.0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod harness;
pub mod learner;
pub mod mdp;
pub mod schedules;
pub use learner::{run_atql, run_icql, run_inner_loop, run_periodic_q, ExplorationPolicy, RunContext, RunTrace};
pub use mdp::{build_gridworld, GridWorld, QTable, RewardDistribution, TabularMdp};
pub use schedules::{
    design_fixed_tuf, design_growing_tuf, DesignOutput, StepSizeSchedule, TheoryConstants, TufSchedule,
};
