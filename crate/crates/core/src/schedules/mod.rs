//! Target-update-frequency and step-size schedules, inner-loop rate
//! constants, and the quasi-optimal schedule designers.

mod constants;
mod design;
mod step_size;
mod tuf;

pub use constants::{compute_constants, TheoryConstants};
pub use design::{
    design_fixed_tuf, design_growing_tuf, growing_cost_closed_form, unroll_error_bound, unroll_error_bound_real,
    DesignFamily, DesignOutput, ErrorBound,
};
pub use step_size::StepSizeSchedule;
pub use tuf::{
    geometric_schedule, schedule_cost, summability_check, AccuracySequence, Summability, SummabilityReport, TufSchedule,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("{0}")]
    Domain(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("degenerate design: eps = {eps} >= 2 * e0 = {} needs no outer iterations", 2.0 * e0)]
    Degenerate { eps: f64, e0: f64 },
}
