use rand::Rng;

use super::{
    CycleRecord, ExplorationPolicy, InnerSummary, LearnError, PairSampler, RunTrace, StopReason, TdErrorTracker,
};
use crate::mdp::{evaluate_greedy, exact_bellman_apply, sample_bellman_target, sup_distance, QTable, TabularMdp};
use crate::schedules::{AccuracySequence, StepSizeSchedule, TufSchedule};

/// Greedy-rollout evaluation of every cycle-start table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub start: usize,
    pub horizon: usize,
}

/// Everything a run needs besides its schedule, initial table and RNG.
#[derive(Debug, Clone)]
pub struct RunContext<'a> {
    pub mdp: &'a TabularMdp,
    pub step_sizes: StepSizeSchedule,
    pub policy: ExplorationPolicy,
    /// `Q*`, for recording the bias of every cycle-start table.
    pub oracle: Option<&'a QTable>,
    pub evaluation: Option<Evaluation>,
    /// Record `||Q_n^(K_n) - T* Q_n^(0)||_inf` per cycle.
    pub record_gap: bool,
    /// Total sample budget; a cycle only starts if it fits.
    pub budget: Option<u64>,
    pub max_cycles: Option<usize>,
}

impl<'a> RunContext<'a> {
    /// Uniform exploration with the theory step sizes for `xi = 1 / |active|`.
    pub fn new(mdp: &'a TabularMdp) -> Self {
        RunContext {
            mdp,
            step_sizes: StepSizeSchedule::uniform_theory(mdp.num_active()),
            policy: ExplorationPolicy::UniformStateAction,
            oracle: None,
            evaluation: None,
            record_gap: true,
            budget: None,
            max_cycles: None,
        }
    }

    pub fn with_step_sizes(mut self, step_sizes: StepSizeSchedule) -> Self {
        self.step_sizes = step_sizes;
        self
    }

    pub fn with_policy(mut self, policy: ExplorationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_oracle(mut self, oracle: &'a QTable) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn with_evaluation(mut self, start: usize, horizon: usize) -> Self {
        self.evaluation = Some(Evaluation { start, horizon });
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_max_cycles(mut self, n: usize) -> Self {
        self.max_cycles = Some(n);
        self
    }

    pub fn without_gap(mut self) -> Self {
        self.record_gap = false;
        self
    }

    fn validate(&self, q0: &QTable) -> Result<(), LearnError> {
        q0.check_shape(self.mdp.shape())?;
        if !q0.is_finite() {
            return Err(LearnError::Domain("initial table has non-finite entries".into()));
        }
        self.step_sizes.validate()?;
        self.policy.validate(self.mdp)?;
        if let Some(o) = self.oracle {
            o.check_shape(self.mdp.shape())?;
        }
        Ok(())
    }

    fn record(&self, cycle: usize, cost: u64, q: &QTable) -> Result<CycleRecord, LearnError> {
        let bias = self.oracle.map(|o| sup_distance(q, o)).transpose()?;
        let score = self.evaluation.map(|e| evaluate_greedy(q, self.mdp, e.start, e.horizon)).transpose()?;
        Ok(CycleRecord { cycle, cost, bias, score, inner: None })
    }
}

/// One asynchronous SGD step against a frozen target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerStep {
    pub state: usize,
    pub action: usize,
    pub target: f64,
    /// TD error `target - Q(s, a)` before the update.
    pub delta: f64,
}

/// Samples a pair, forms `r + gamma max_a' q_frozen(s', a')` and moves that
/// single entry of `q` to `(1 - alpha) q(s, a) + alpha target`.
pub fn inner_sgd_step<R: Rng + ?Sized>(
    q: &mut QTable,
    q_frozen: &QTable,
    mdp: &TabularMdp,
    sampler: &mut PairSampler,
    alpha: f64,
    rng: &mut R,
) -> Result<InnerStep, LearnError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(LearnError::Domain(format!("step size {alpha} outside (0, 1]")));
    }
    let (state, action) = sampler.draw(q, mdp, rng);
    let t = sample_bellman_target(q_frozen, mdp, state, action, rng)?;
    sampler.advance(t.next_state, mdp);
    let old = q.get(state, action);
    q.set(state, action, (1.0 - alpha) * old + alpha * t.target_value);
    Ok(InnerStep { state, action, target: t.target_value, delta: t.target_value - old })
}

/// `k` steps against the frozen `q_in`; step sizes restart at `k = 0`.
pub fn run_inner_loop<R: Rng + ?Sized>(
    q_in: &QTable,
    k: u64,
    ctx: &RunContext<'_>,
    rng: &mut R,
) -> Result<QTable, LearnError> {
    run_inner_loop_observed(q_in, k, ctx, rng, |_, _| {})
}

/// [`run_inner_loop`] calling `observe(steps_done, &q)` after every step.
pub fn run_inner_loop_observed<R: Rng + ?Sized>(
    q_in: &QTable,
    k: u64,
    ctx: &RunContext<'_>,
    rng: &mut R,
    mut observe: impl FnMut(u64, &QTable),
) -> Result<QTable, LearnError> {
    if k == 0 {
        return Err(LearnError::Domain("inner loop needs K >= 1".into()));
    }
    ctx.validate(q_in)?;
    let mut sampler = PairSampler::new(ctx.policy.clone(), ctx.mdp)?;
    let mut q = q_in.clone();
    for step in 0..k {
        inner_sgd_step(&mut q, q_in, ctx.mdp, &mut sampler, ctx.step_sizes.alpha(step), rng)?;
        observe(step + 1, &q);
    }
    Ok(q)
}

fn cycle_allowance(ctx: &RunContext<'_>, cycle: usize, cost: u64) -> Option<u64> {
    if ctx.max_cycles.is_some_and(|m| cycle >= m) {
        return Some(0);
    }
    ctx.budget.map(|b| b.saturating_sub(cost))
}

fn finish_cycle(
    ctx: &RunContext<'_>,
    record: &mut CycleRecord,
    frozen: &QTable,
    q: &QTable,
    steps: u64,
    stop: StopReason,
    final_m: Option<f64>,
) -> Result<(), LearnError> {
    let gap = if ctx.record_gap { Some(sup_distance(q, &exact_bellman_apply(frozen, ctx.mdp)?)?) } else { None };
    record.inner = Some(InnerSummary { steps, gap, stop, final_m });
    Ok(())
}

/// Periodic Q-learning with a predetermined TUF schedule: the target is
/// frozen at each cycle start and overwritten at its end.
pub fn run_periodic_q<R: Rng + ?Sized>(
    q0: &QTable,
    schedule: &TufSchedule,
    ctx: &RunContext<'_>,
    rng: &mut R,
) -> Result<RunTrace, LearnError> {
    if let TufSchedule::AccuracyTriggered { .. } = schedule {
        return Err(LearnError::Domain("accuracy-triggered schedules run through run_atql".into()));
    }
    schedule.validate()?;
    ctx.validate(q0)?;
    if schedule.num_cycles().is_none() && ctx.max_cycles.is_none() && ctx.budget.is_none() {
        return Err(LearnError::Unbounded);
    }
    let mut sampler = PairSampler::new(ctx.policy.clone(), ctx.mdp)?;
    let mut q = q0.clone();
    let mut records = Vec::new();
    let mut cost = 0u64;
    let mut cycle = 0usize;
    loop {
        let mut record = ctx.record(cycle, cost, &q)?;
        let k = match schedule.tuf(cycle)? {
            Some(k) if cycle_allowance(ctx, cycle, cost).is_none_or(|left| k <= left) => k,
            _ => {
                records.push(record);
                break;
            }
        };
        let frozen = q.clone();
        for step in 0..k {
            inner_sgd_step(&mut q, &frozen, ctx.mdp, &mut sampler, ctx.step_sizes.alpha(step), rng)?;
        }
        finish_cycle(ctx, &mut record, &frozen, &q, k, StopReason::Scheduled, None)?;
        records.push(record);
        cost += k;
        cycle += 1;
    }
    Ok(RunTrace { records, final_q: q })
}

/// Increasing-cycle Q-learning: `n_cycles` cycles with
/// `K_n = ceil(k0 gamma^(-2n/3))`, warm-starting every cycle from the last.
pub fn run_icql<R: Rng + ?Sized>(
    q0: &QTable,
    k0: u64,
    n_cycles: usize,
    ctx: &RunContext<'_>,
    rng: &mut R,
) -> Result<RunTrace, LearnError> {
    let schedule = TufSchedule::Geometric { k0, gamma: ctx.mdp.gamma() };
    let n = ctx.max_cycles.map_or(n_cycles, |m| m.min(n_cycles));
    let ctx = ctx.clone().with_max_cycles(n);
    run_periodic_q(q0, &schedule, &ctx, rng)
}

/// Accuracy-triggered target updates. Each cycle resets the TD-error
/// tracker and stops once `k >= k_min` and `M <= eps_n` (`n` counted from 1),
/// or after `k_max` steps.
pub fn run_atql<R: Rng + ?Sized>(
    q0: &QTable,
    k_min: u64,
    k_max: u64,
    accuracy: &AccuracySequence,
    ctx: &RunContext<'_>,
    rng: &mut R,
) -> Result<RunTrace, LearnError> {
    TufSchedule::AccuracyTriggered { k_min, k_max, accuracy: accuracy.clone() }.validate()?;
    ctx.validate(q0)?;
    if ctx.max_cycles.is_none() && ctx.budget.is_none() {
        return Err(LearnError::Unbounded);
    }
    let mdp = ctx.mdp;
    let mut sampler = PairSampler::new(ctx.policy.clone(), mdp)?;
    let mut tracker = TdErrorTracker::new(mdp.num_states() * mdp.num_actions(), mdp.num_active());
    let mut q = q0.clone();
    let mut records = Vec::new();
    let mut cost = 0u64;
    let mut cycle = 0usize;
    loop {
        let mut record = ctx.record(cycle, cost, &q)?;
        let cap = match cycle_allowance(ctx, cycle, cost) {
            None => k_max,
            Some(left) if left >= k_min => left.min(k_max),
            Some(_) => {
                records.push(record);
                break;
            }
        };
        let eps = accuracy.eps(cycle + 1);
        tracker.reset();
        let frozen = q.clone();
        let mut steps = 0;
        let mut m = 0.0;
        let mut stop = if cap < k_max { StopReason::Budget } else { StopReason::Scheduled };
        while steps < cap {
            let step = inner_sgd_step(&mut q, &frozen, mdp, &mut sampler, ctx.step_sizes.alpha(steps), rng)?;
            tracker.record(step.state * mdp.num_actions() + step.action, step.delta);
            steps += 1;
            if steps >= k_min {
                m = tracker.statistic();
                if m <= eps {
                    stop = StopReason::Accuracy;
                    break;
                }
            }
        }
        if steps < k_min {
            m = tracker.statistic();
        }
        finish_cycle(ctx, &mut record, &frozen, &q, steps, stop, Some(m))?;
        records.push(record);
        cost += steps;
        cycle += 1;
    }
    Ok(RunTrace { records, final_q: q })
}

/// Dispatches on the schedule kind.
pub fn run_schedule<R: Rng + ?Sized>(
    q0: &QTable,
    schedule: &TufSchedule,
    ctx: &RunContext<'_>,
    rng: &mut R,
) -> Result<RunTrace, LearnError> {
    match schedule {
        TufSchedule::AccuracyTriggered { k_min, k_max, accuracy } => run_atql(q0, *k_min, *k_max, accuracy, ctx, rng),
        other => run_periodic_q(q0, other, ctx, rng),
    }
}

/// Outer loop with exact inner solves (`Q_{n+1} = T* Q_n`), the limit of
/// infinitely long inner loops. Costs are reported as zero.
pub fn run_exact_outer(q0: &QTable, n_cycles: usize, ctx: &RunContext<'_>) -> Result<RunTrace, LearnError> {
    ctx.validate(q0)?;
    let mut q = q0.clone();
    let mut records = Vec::with_capacity(n_cycles + 1);
    for cycle in 0..n_cycles {
        let mut record = ctx.record(cycle, 0, &q)?;
        let next = exact_bellman_apply(&q, ctx.mdp)?;
        record.inner = Some(InnerSummary {
            steps: 0,
            gap: ctx.record_gap.then_some(0.0),
            stop: StopReason::Scheduled,
            final_m: None,
        });
        records.push(record);
        q = next;
    }
    records.push(ctx.record(n_cycles, 0, &q)?);
    Ok(RunTrace { records, final_q: q })
}
