use rand::Rng;

use super::{sup_distance, MdpError, QTable, TabularMdp};

pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;
pub const DEFAULT_VI_MAX_ITERS: usize = 1_000_000;

/// One draw of `r + gamma * max_a' q_frozen(s', a')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledTarget {
    pub reward: f64,
    pub next_state: Option<usize>,
    pub target_value: f64,
}

impl SampledTarget {
    /// Recomputes the target from its parts against `q_frozen`.
    pub fn recompute(&self, q_frozen: &QTable, mdp: &TabularMdp) -> f64 {
        self.reward + mdp.gamma() * mdp.continuation(q_frozen, self.next_state)
    }
}

/// `(T* q)(s, a) = E[r(s, a)] + gamma * max_a' q(s', a')`.
///
/// Terminal rows of the result are zero.
pub fn exact_bellman_apply(q: &QTable, mdp: &TabularMdp) -> Result<QTable, MdpError> {
    q.check_shape(mdp.shape())?;
    let mut out = mdp.zeros();
    apply_into(q, mdp, &mut out);
    Ok(out)
}

fn apply_into(q: &QTable, mdp: &TabularMdp, out: &mut QTable) {
    let gamma = mdp.gamma();
    for &(s, a) in mdp.active_pairs() {
        // active pairs always carry an outcome
        let o = mdp.outcome(s, a).unwrap();
        out.set(s, a, o.reward.mean() + gamma * mdp.continuation(q, o.next));
    }
}

/// Jacobi value iteration from the zero table until `||T*Q - Q||_inf <= tol`.
pub fn value_iteration_oracle(mdp: &TabularMdp, tol: f64) -> Result<QTable, MdpError> {
    value_iteration_oracle_with_cap(mdp, tol, DEFAULT_VI_MAX_ITERS)
}

pub fn value_iteration_oracle_with_cap(mdp: &TabularMdp, tol: f64, max_iters: usize) -> Result<QTable, MdpError> {
    if !(tol > 0.0) {
        return Err(MdpError::Invalid(format!("tolerance {tol} must be positive")));
    }
    let mut q = mdp.zeros();
    let mut next = mdp.zeros();
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        apply_into(&q, mdp, &mut next);
        residual = sup_distance(&next, &q)?;
        std::mem::swap(&mut q, &mut next);
        // q = T*(old); its own residual is at most gamma * residual
        if residual <= tol {
            return Ok(q);
        }
    }
    Err(MdpError::IterationLimit { tol, iters: max_iters, residual })
}

/// Executes `(s, a)` once: returns the sampled reward and the successor.
pub fn sample_transition<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    state: usize,
    action: usize,
    rng: &mut R,
) -> Result<(f64, Option<usize>), MdpError> {
    let o = mdp.outcome(state, action)?;
    Ok((o.reward.sample(rng), o.next))
}

/// Unbiased single-sample estimate of `(T* q_frozen)(s, a)`.
pub fn sample_bellman_target<R: Rng + ?Sized>(
    q_frozen: &QTable,
    mdp: &TabularMdp,
    state: usize,
    action: usize,
    rng: &mut R,
) -> Result<SampledTarget, MdpError> {
    let (reward, next_state) = sample_transition(mdp, state, action, rng)?;
    Ok(SampledTarget {
        reward,
        next_state,
        target_value: reward + mdp.gamma() * mdp.continuation(q_frozen, next_state),
    })
}

/// Greedy rollout score: undiscounted sum of *mean* rewards along the path
/// taken by `argmax_a q(s, a)` for at most `horizon` steps.
pub fn evaluate_greedy(q: &QTable, mdp: &TabularMdp, start: usize, horizon: usize) -> Result<f64, MdpError> {
    rollout(q, mdp, start, horizon, |o| o.reward.mean())
}

/// Like [`evaluate_greedy`] but with sampled rewards.
pub fn evaluate_greedy_sampled<R: Rng + ?Sized>(
    q: &QTable,
    mdp: &TabularMdp,
    start: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<f64, MdpError> {
    rollout(q, mdp, start, horizon, |o| o.reward.sample(rng))
}

fn rollout(
    q: &QTable,
    mdp: &TabularMdp,
    start: usize,
    horizon: usize,
    mut reward: impl FnMut(&super::Outcome) -> f64,
) -> Result<f64, MdpError> {
    q.check_shape(mdp.shape())?;
    if start >= mdp.num_states() {
        return Err(MdpError::Domain { state: start, action: 0 });
    }
    let mut state = start;
    let mut score = 0.0;
    for _ in 0..horizon {
        if mdp.is_terminal(state) {
            break;
        }
        let o = mdp.outcome(state, q.argmax_row(state))?;
        score += reward(o);
        match o.next {
            Some(next) => state = next,
            None => break,
        }
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{build_gridworld, Outcome, RewardDistribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain(gamma: f64) -> TabularMdp {
        // 0 -> 1 -> exit, two actions each, action 1 pays more
        let r = |v| RewardDistribution::deterministic(v).unwrap();
        let outcomes = vec![
            Some(Outcome { reward: r(0.0), next: Some(1) }),
            Some(Outcome { reward: r(1.0), next: Some(1) }),
            Some(Outcome { reward: r(2.0), next: None }),
            Some(Outcome { reward: r(-1.0), next: Some(0) }),
        ];
        TabularMdp::new(2, 2, gamma, vec![false, false], outcomes).unwrap()
    }

    #[test]
    fn zero_rewards_have_zero_fixed_point() {
        let r = RewardDistribution::two_point(-1.0, 1.0, 0.5).unwrap();
        let o = Some(Outcome { reward: r, next: Some(0) });
        let mdp = TabularMdp::new(1, 2, 0.9, vec![false], vec![o, o]).unwrap();
        let out = exact_bellman_apply(&mdp.zeros(), &mdp).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn chain_fixed_point_by_hand() {
        let mdp = chain(0.5);
        let q = value_iteration_oracle(&mdp, 1e-12).unwrap();
        // Q(1,0) = 2; Q(1,1) = -1 + 0.5 max Q(0,.) ; Q(0,1) = 1 + 0.5*2 = 2
        assert!((q.get(1, 0) - 2.0).abs() < 1e-10);
        assert!((q.get(0, 1) - 2.0).abs() < 1e-10);
        assert!((q.get(0, 0) - 1.0).abs() < 1e-10);
        assert!((q.get(1, 1) - 0.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_rejects_nonpositive_tol() {
        assert!(value_iteration_oracle(&chain(0.5), 0.0).is_err());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let err = value_iteration_oracle_with_cap(&build_gridworld(0.95).unwrap(), 1e-12, 5).unwrap_err();
        assert!(matches!(err, MdpError::IterationLimit { iters: 5, .. }));
    }

    #[test]
    fn shape_mismatch() {
        let mdp = chain(0.5);
        assert!(matches!(exact_bellman_apply(&QTable::zeros(3, 2), &mdp), Err(MdpError::Dimension { .. })));
    }

    #[test]
    fn sampled_target_recomputes() {
        let mdp = build_gridworld(0.7).unwrap();
        let q = QTable::from_fn(16, 4, |s, a| ((s * 4 + a) as f64 * 0.13).cos());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(s, a) in mdp.active_pairs() {
            let t = sample_bellman_target(&q, &mdp, s, a, &mut rng).unwrap();
            assert_eq!(t.recompute(&q, &mdp), t.target_value);
        }
    }

    #[test]
    fn deterministic_reward_without_bootstrap() {
        let mdp = chain(0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            let t = sample_bellman_target(&mdp.zeros(), &mdp, 1, 0, &mut rng).unwrap();
            assert_eq!(t.target_value, 2.0);
        }
    }

    #[test]
    fn empty_rollout_scores_zero() {
        let mdp = chain(0.9);
        assert_eq!(evaluate_greedy(&mdp.zeros(), &mdp, 0, 0).unwrap(), 0.0);
    }
}
