use serde::{Deserialize, Serialize};

use super::ScheduleError;
use crate::mdp::{QTable, TabularMdp};

/// Constants of the inner-loop SGD rate bound
/// `E||Q^(k+1) - T*Q^(0)||_2^2 <= (c1 ||Q^(0) - Q*||_inf^2 + c2) / (k + s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    /// Per-step lower bound on the probability of sampling any pair.
    pub xi: f64,
    /// Bound on reward variances.
    pub sigma2: f64,
    pub q_star_sup: f64,
    pub gamma: f64,
    /// Number of active state-action pairs.
    pub num_pairs: usize,
    pub c1: f64,
    pub c2: f64,
    /// Effective contraction `(1 + gamma) / 2`.
    pub mu: f64,
}

impl TheoryConstants {
    pub fn from_parts(
        xi: f64,
        sigma2: f64,
        q_star_sup: f64,
        gamma: f64,
        num_pairs: usize,
    ) -> Result<Self, ScheduleError> {
        if !(xi > 0.0 && xi <= 1.0) {
            return Err(ScheduleError::Domain(format!("xi = {xi} must lie in (0, 1]")));
        }
        if !(sigma2 >= 0.0) || !q_star_sup.is_finite() || q_star_sup < 0.0 {
            return Err(ScheduleError::Domain("sigma2 and ||Q*|| must be finite and nonnegative".into()));
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(ScheduleError::Domain(format!("gamma = {gamma} outside [0, 1)")));
        }
        let n = num_pairs as f64;
        let g2 = gamma * gamma;
        let c1 = (2.0 / xi + 1.0) * n * (1.0 + gamma) * (1.0 + gamma) + (16.0 / (xi * xi) + 8.0 / xi) * g2;
        let c2 = (8.0 / (xi * xi) + 4.0 / xi) * (sigma2 + 2.0 * g2 * q_star_sup * q_star_sup);
        Ok(TheoryConstants { xi, sigma2, q_star_sup, gamma, num_pairs, c1, c2, mu: (1.0 + gamma) / 2.0 })
    }

    /// Step-size offset `s = 2 / xi`.
    pub fn s(&self) -> f64 {
        2.0 / self.xi
    }

    /// Smallest TUF keeping `gamma + sqrt(c1 / K) <= mu`.
    pub fn k_min(&self) -> f64 {
        let gap = self.mu - self.gamma;
        self.c1 / (gap * gap)
    }

    /// Right-hand side of the inner-loop rate bound after `k` steps.
    pub fn inner_rate_bound(&self, initial_bias: f64, k: f64) -> f64 {
        (self.c1 * initial_bias * initial_bias + self.c2) / (k + self.s())
    }
}

/// Constants for `mdp` with `sigma2` the largest reward variance and
/// `q_star_sup = ||q_star||_inf`.
pub fn compute_constants(mdp: &TabularMdp, xi: f64, q_star: &QTable) -> Result<TheoryConstants, ScheduleError> {
    if q_star.shape() != mdp.shape() || !q_star.is_finite() {
        return Err(ScheduleError::Domain("q_star must be finite and match the MDP".into()));
    }
    TheoryConstants::from_parts(xi, mdp.max_reward_variance(), q_star.sup_norm(), mdp.gamma(), mdp.num_active())
}
