use serde::{Deserialize, Serialize};

use super::ScheduleError;

/// Inner-loop step sizes `alpha(k)`, indexed from `k = 0` at each cycle start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepSizeSchedule {
    /// `alpha(k) = 2 / (xi (k + s)) = s / (k + s)` with `s = 2 / xi`.
    TheoryInverse {
        offset: f64,
    },
    Constant {
        alpha: f64,
    },
    /// Explicit per-step values; the last one is held.
    Custom {
        alphas: Vec<f64>,
    },
}

impl StepSizeSchedule {
    pub fn theory_inverse(xi: f64) -> Result<Self, ScheduleError> {
        if !(xi > 0.0 && xi <= 1.0) {
            return Err(ScheduleError::Domain(format!("xi = {xi} must lie in (0, 1]")));
        }
        Ok(StepSizeSchedule::TheoryInverse { offset: 2.0 / xi })
    }

    /// Theory step sizes for uniform sampling over `num_pairs` pairs, i.e.
    /// `alpha(k) = 1 / (1 + k / (2 num_pairs))`.
    pub fn uniform_theory(num_pairs: usize) -> Self {
        StepSizeSchedule::TheoryInverse { offset: 2.0 * num_pairs as f64 }
    }

    pub fn constant(alpha: f64) -> Result<Self, ScheduleError> {
        let s = StepSizeSchedule::Constant { alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        let ok = match self {
            StepSizeSchedule::TheoryInverse { offset } => *offset >= 2.0 && offset.is_finite(),
            StepSizeSchedule::Constant { alpha } => *alpha > 0.0 && *alpha <= 1.0,
            StepSizeSchedule::Custom { alphas } => !alphas.is_empty() && alphas.iter().all(|a| *a > 0.0 && *a <= 1.0),
        };
        if ok {
            Ok(())
        } else {
            Err(ScheduleError::Domain(format!("step sizes must lie in (0, 1]: {self:?}")))
        }
    }

    #[inline]
    pub fn alpha(&self, k: u64) -> f64 {
        match self {
            StepSizeSchedule::TheoryInverse { offset } => offset / (k as f64 + offset),
            StepSizeSchedule::Constant { alpha } => *alpha,
            StepSizeSchedule::Custom { alphas } => alphas[(k as usize).min(alphas.len() - 1)],
        }
    }
}
