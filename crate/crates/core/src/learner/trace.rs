use serde::{Deserialize, Serialize};

use crate::mdp::QTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// Ran the scheduled number of steps (or hit `k_max`).
    Scheduled,
    /// Accuracy trigger fired.
    Accuracy,
    /// Cut short by the sample budget.
    Budget,
}

/// What the inner loop of one cycle did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerSummary {
    pub steps: u64,
    /// `||Q_n^(K_n) - T* Q_n^(0)||_inf`, a single realisation of the
    /// Bellman approximation error.
    pub gap: Option<f64>,
    pub stop: StopReason,
    /// Final TD-error statistic (accuracy-triggered runs only).
    pub final_m: Option<f64>,
}

/// State at the start of cycle `n`, plus the inner loop run from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    /// Samples spent before this cycle started.
    pub cost: u64,
    /// `||Q_n^(0) - Q*||_inf` when an oracle was supplied.
    pub bias: Option<f64>,
    pub score: Option<f64>,
    /// `None` for the final record, which only describes the returned table.
    pub inner: Option<InnerSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<CycleRecord>,
    pub final_q: QTable,
}

impl RunTrace {
    pub fn num_cycles(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn total_cost(&self) -> u64 {
        self.records.last().map_or(0, |r| r.cost)
    }

    /// Inner-loop lengths actually run, in cycle order.
    pub fn tufs(&self) -> Vec<u64> {
        self.records.iter().filter_map(|r| r.inner.map(|i| i.steps)).collect()
    }

    pub fn final_bias(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.bias)
    }

    pub fn biases(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.bias).collect()
    }
}
