use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::mdp::{QTable, TabularMdp};

/// How the inner loop picks the pair to update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExplorationPolicy {
    /// Generative sampling: every active pair with probability `1 / |active|`.
    UniformStateAction,
    /// Trajectory-following epsilon-greedy on the current table. Episodes
    /// restart at `start`. The visitation bound `xi` cannot be derived for
    /// this process and must be supplied.
    EpsilonGreedy { epsilon: f64, start: usize, xi: f64 },
}

impl ExplorationPolicy {
    /// Per-step lower bound on the probability of any active pair.
    pub fn xi(&self, mdp: &TabularMdp) -> f64 {
        match self {
            ExplorationPolicy::UniformStateAction => 1.0 / mdp.num_active() as f64,
            ExplorationPolicy::EpsilonGreedy { xi, .. } => *xi,
        }
    }

    pub fn validate(&self, mdp: &TabularMdp) -> Result<(), LearnError> {
        match *self {
            ExplorationPolicy::UniformStateAction => Ok(()),
            ExplorationPolicy::EpsilonGreedy { epsilon, start, xi } => {
                if !(0.0..=1.0).contains(&epsilon) || !(xi > 0.0 && xi <= 1.0) {
                    return Err(LearnError::Domain(format!(
                        "epsilon-greedy needs epsilon in [0, 1] and xi in (0, 1], got {epsilon}, {xi}"
                    )));
                }
                if start >= mdp.num_states() || mdp.is_terminal(start) {
                    return Err(LearnError::Domain(format!("start state {start} is terminal or out of range")));
                }
                Ok(())
            }
        }
    }
}

/// Stateful pair generator for one run.
#[derive(Debug, Clone)]
pub struct PairSampler {
    policy: ExplorationPolicy,
    current: usize,
}

impl PairSampler {
    pub fn new(policy: ExplorationPolicy, mdp: &TabularMdp) -> Result<Self, LearnError> {
        policy.validate(mdp)?;
        let current = match policy {
            ExplorationPolicy::EpsilonGreedy { start, .. } => start,
            ExplorationPolicy::UniformStateAction => 0,
        };
        Ok(PairSampler { policy, current })
    }

    pub fn policy(&self) -> &ExplorationPolicy {
        &self.policy
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&mut self, q: &QTable, mdp: &TabularMdp, rng: &mut R) -> (usize, usize) {
        match self.policy {
            ExplorationPolicy::UniformStateAction => {
                let pairs = mdp.active_pairs();
                pairs[rng.random_range(0..pairs.len())]
            }
            ExplorationPolicy::EpsilonGreedy { epsilon, .. } => {
                let s = self.current;
                let a = if rng.random::<f64>() < epsilon {
                    rng.random_range(0..mdp.num_actions())
                } else {
                    q.argmax_row(s)
                };
                (s, a)
            }
        }
    }

    /// Moves the behaviour state after a transition.
    #[inline]
    pub fn advance(&mut self, next: Option<usize>, mdp: &TabularMdp) {
        if let ExplorationPolicy::EpsilonGreedy { start, .. } = self.policy {
            self.current = match next {
                Some(s) if !mdp.is_terminal(s) => s,
                _ => start,
            };
        }
    }
}
