use serde::{Deserialize, Serialize};

use super::{MdpError, QTable, RewardDistribution};

/// What happens when action `a` is taken in non-terminal state `s`.
///
/// Transitions are deterministic. `next == None` ends the episode; so does
/// landing in a terminal state. Either way the continuation value is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub reward: RewardDistribution,
    pub next: Option<usize>,
}

/// Finite MDP with deterministic transitions and per-pair reward laws.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMdp {
    num_states: usize,
    num_actions: usize,
    gamma: f64,
    terminal: Vec<bool>,
    outcomes: Vec<Option<Outcome>>,
    active: Vec<(usize, usize)>,
}

impl TabularMdp {
    /// `outcomes` is row-major over `(state, action)`; terminal states must
    /// carry `None`, every other pair `Some`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        gamma: f64,
        terminal: Vec<bool>,
        outcomes: Vec<Option<Outcome>>,
    ) -> Result<Self, MdpError> {
        if num_states == 0 || num_actions == 0 {
            return Err(MdpError::Invalid("empty state or action space".into()));
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(MdpError::Invalid(format!("discount {gamma} outside [0, 1)")));
        }
        if terminal.len() != num_states || outcomes.len() != num_states * num_actions {
            return Err(MdpError::Invalid("terminal mask or outcome table has wrong length".into()));
        }
        let mut active = Vec::new();
        for s in 0..num_states {
            for a in 0..num_actions {
                match (&outcomes[s * num_actions + a], terminal[s]) {
                    (None, true) => {}
                    (Some(o), false) => {
                        o.reward.validate()?;
                        if let Some(next) = o.next {
                            if next >= num_states {
                                return Err(MdpError::Invalid(format!("({s}, {a}) moves to missing state {next}")));
                            }
                        }
                        active.push((s, a));
                    }
                    (Some(_), true) => return Err(MdpError::Invalid(format!("terminal state {s} has an outcome"))),
                    (None, false) => return Err(MdpError::Invalid(format!("({s}, {a}) has no outcome"))),
                }
            }
        }
        if active.is_empty() {
            return Err(MdpError::Invalid("no active state-action pairs".into()));
        }
        Ok(TabularMdp { num_states, num_actions, gamma, terminal, outcomes, active })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.num_states, self.num_actions)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same dynamics under another discount.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self, MdpError> {
        Self::new(self.num_states, self.num_actions, gamma, self.terminal.clone(), self.outcomes.clone())
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }

    /// Non-terminal pairs in row-major order; these are the pairs learning samples.
    pub fn active_pairs(&self) -> &[(usize, usize)] {
        &self.active
    }

    pub fn num_active(&self) -> usize {
        self.active.len()
    }

    pub fn outcome(&self, state: usize, action: usize) -> Result<&Outcome, MdpError> {
        if state >= self.num_states || action >= self.num_actions {
            return Err(MdpError::Domain { state, action });
        }
        self.outcomes[state * self.num_actions + action].as_ref().ok_or(MdpError::Domain { state, action })
    }

    /// `max_a q(next, a)`, or zero when the episode ends.
    #[inline]
    pub fn continuation(&self, q: &QTable, next: Option<usize>) -> f64 {
        match next {
            Some(s) if !self.terminal[s] => q.max_row(s),
            _ => 0.0,
        }
    }

    /// Largest reward variance over active pairs.
    pub fn max_reward_variance(&self) -> f64 {
        self.active
            .iter()
            .map(|&(s, a)| self.outcomes[s * self.num_actions + a].unwrap().reward.variance())
            .fold(0.0, f64::max)
    }

    pub fn zeros(&self) -> QTable {
        QTable::zeros(self.num_states, self.num_actions)
    }
}
