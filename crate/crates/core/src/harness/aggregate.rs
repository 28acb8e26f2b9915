//! Cost-aligned aggregation across seeds.
//!
//! Each trace is read as a step function of cumulative cost: at cost `c` it
//! reports the last cycle-start record with `cost <= c`. Seeds are then
//! summarised per checkpoint by mean, median and the 2.5 / 97.5 percentiles.

use serde::{Deserialize, Serialize};

use super::{ExperimentResult, HarnessError};
use crate::learner::{CycleRecord, RunTrace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRow {
    pub cumulative_cost: u64,
    /// Median (lower) cycle index across seeds.
    pub cycle: usize,
    pub bias_mean: Option<f64>,
    pub bias_median: Option<f64>,
    pub bias_lo: Option<f64>,
    pub bias_hi: Option<f64>,
    pub score_median: Option<f64>,
    pub score_lo: Option<f64>,
    pub score_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArmStats {
    pub label: String,
    pub rows: Vec<CheckpointRow>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateStats {
    pub arms: Vec<ArmStats>,
}

impl AggregateStats {
    pub fn arm(&self, label: &str) -> Option<&ArmStats> {
        self.arms.iter().find(|a| a.label == label)
    }

    pub fn num_rows(&self) -> usize {
        self.arms.iter().map(|a| a.rows.len()).sum()
    }
}

/// `n` strictly increasing costs from 0 to `budget` (fewer if the budget is
/// smaller than `n - 1`).
pub fn cost_grid(budget: u64, n: usize) -> Vec<u64> {
    let n = n.max(2) as u128;
    let mut grid: Vec<u64> = (0..n).map(|i| (budget as u128 * i / (n - 1)) as u64).collect();
    grid.dedup();
    grid
}

/// Linearly interpolated percentile of sorted data, `p` in `[0, 1]`.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn record_at(trace: &RunTrace, cost: u64) -> &CycleRecord {
    let i = trace.records.partition_point(|r| r.cost <= cost);
    &trace.records[i.saturating_sub(1)]
}

struct Summary {
    mean: f64,
    median: f64,
    lo: f64,
    hi: f64,
}

fn summarise(values: Option<Vec<f64>>) -> Option<Summary> {
    let mut v = values?;
    v.sort_by(f64::total_cmp);
    Some(Summary {
        mean: v.iter().sum::<f64>() / v.len() as f64,
        median: percentile(&v, 0.5),
        lo: percentile(&v, 0.025),
        hi: percentile(&v, 0.975),
    })
}

/// Aggregates one arm's seeds on `grid`.
pub fn aggregate_arm(label: &str, traces: &[RunTrace], grid: &[u64]) -> Result<ArmStats, HarnessError> {
    if traces.is_empty() || traces.iter().any(|t| t.records.is_empty()) {
        return Err(HarnessError::Alignment(format!("arm {label} has no records")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::Alignment("checkpoint costs must be strictly increasing".into()));
    }
    let rows = grid
        .iter()
        .map(|&cost| {
            let recs: Vec<&CycleRecord> = traces.iter().map(|t| record_at(t, cost)).collect();
            let mut cycles: Vec<usize> = recs.iter().map(|r| r.cycle).collect();
            cycles.sort_unstable();
            let bias = summarise(recs.iter().map(|r| r.bias).collect());
            let score = summarise(recs.iter().map(|r| r.score).collect());
            CheckpointRow {
                cumulative_cost: cost,
                cycle: cycles[(cycles.len() - 1) / 2],
                bias_mean: bias.as_ref().map(|s| s.mean),
                bias_median: bias.as_ref().map(|s| s.median),
                bias_lo: bias.as_ref().map(|s| s.lo),
                bias_hi: bias.as_ref().map(|s| s.hi),
                score_median: score.as_ref().map(|s| s.median),
                score_lo: score.as_ref().map(|s| s.lo),
                score_hi: score.as_ref().map(|s| s.hi),
            }
        })
        .collect();
    Ok(ArmStats { label: label.to_string(), rows })
}

/// Aggregates every arm on a shared grid of `checkpoints` costs up to the
/// experiment budget.
pub fn aggregate(result: &ExperimentResult, checkpoints: usize) -> Result<AggregateStats, HarnessError> {
    let grid = cost_grid(result.budget, checkpoints);
    let arms = result
        .arms
        .iter()
        .map(|arm| {
            if arm.traces.len() != result.seeds.len() {
                return Err(HarnessError::Alignment(format!(
                    "arm {} has {} traces for {} seeds",
                    arm.label,
                    arm.traces.len(),
                    result.seeds.len()
                )));
            }
            aggregate_arm(&arm.label, &arm.traces, &grid)
        })
        .collect::<Result<_, _>>()?;
    Ok(AggregateStats { arms })
}
