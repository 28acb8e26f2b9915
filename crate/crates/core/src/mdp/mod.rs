//! Finite MDPs and exact Bellman machinery.

mod bellman;
mod gridworld;
mod qtable;
mod reward;
mod tabular;

pub use bellman::{
    evaluate_greedy, evaluate_greedy_sampled, exact_bellman_apply, sample_bellman_target, sample_transition,
    value_iteration_oracle, value_iteration_oracle_with_cap, SampledTarget, DEFAULT_ORACLE_TOL, DEFAULT_VI_MAX_ITERS,
};
pub use gridworld::{build_gridworld, CellRole, GridSpec, GridWorld, RewardTable, ACTIONS};
pub use qtable::{sup_distance, QTable};
pub use reward::RewardDistribution;
pub use tabular::{Outcome, TabularMdp};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdpError {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    Dimension { expected: (usize, usize), got: (usize, usize) },
    #[error("state-action pair ({state}, {action}) is terminal or out of range")]
    Domain { state: usize, action: usize },
    #[error("invalid MDP: {0}")]
    Invalid(String),
    #[error("value iteration did not reach tolerance {tol:e} within {iters} sweeps (residual {residual:e})")]
    IterationLimit { tol: f64, iters: usize, residual: f64 },
    #[error("invalid environment spec: {0}")]
    Spec(String),
}
