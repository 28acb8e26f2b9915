use serde::{Deserialize, Serialize};

use super::ScheduleError;

/// Slack under which a value is treated as already integral before taking the
/// ceiling, so float noise such as `1000 * (1 + 1e-15)` does not bump a TUF by
/// one. Absolute, so large TUFs are never rounded down by whole units.
const CEIL_SNAP: f64 = 1e-9;

pub(crate) fn ceil_snapped(x: f64) -> f64 {
    let f = x.floor();
    if x - f <= CEIL_SNAP {
        f
    } else {
        f + 1.0
    }
}

pub(crate) fn to_count(x: f64, what: &str) -> Result<u64, ScheduleError> {
    // 2^64 is exactly representable; anything at or above it overflows u64
    if !x.is_finite() || x >= 18_446_744_073_709_551_616.0 {
        return Err(ScheduleError::Overflow(format!("{what} = {x:e} does not fit in u64")));
    }
    Ok(x.max(1.0) as u64)
}

/// `ceil(k0 * gamma^(-2n/3))`.
pub fn geometric_schedule(k0: u64, gamma: f64, n: u64) -> Result<u64, ScheduleError> {
    if k0 == 0 {
        return Err(ScheduleError::Domain("K0 must be at least 1".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(ScheduleError::Domain(format!("gamma = {gamma} outside (0, 1)")));
    }
    if n == 0 {
        return Ok(k0);
    }
    let raw = k0 as f64 * gamma.powf(-2.0 * n as f64 / 3.0);
    to_count(ceil_snapped(raw), &format!("K_{n}"))
}

/// Exact `sum K_j`.
pub fn schedule_cost(tufs: &[u64]) -> Result<u64, ScheduleError> {
    tufs.iter().try_fold(0u64, |acc, &k| {
        acc.checked_add(k).ok_or_else(|| ScheduleError::Overflow("schedule cost exceeds u64".into()))
    })
}

/// Per-cycle accuracy thresholds `eps_n`, `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AccuracySequence {
    /// `eps_n = n^(-p)`.
    InversePower {
        p: f64,
    },
    Constant {
        eps: f64,
    },
    /// Explicit values; the last one is held.
    Custom {
        eps: Vec<f64>,
    },
}

impl Default for AccuracySequence {
    fn default() -> Self {
        AccuracySequence::InversePower { p: 2.0 }
    }
}

impl AccuracySequence {
    /// Threshold for 1-based cycle `n`.
    pub fn eps(&self, n: usize) -> f64 {
        let n = n.max(1);
        match self {
            AccuracySequence::InversePower { p } => (n as f64).powf(-p),
            AccuracySequence::Constant { eps } => *eps,
            AccuracySequence::Custom { eps } => eps[(n - 1).min(eps.len().saturating_sub(1))],
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        let ok = match self {
            AccuracySequence::InversePower { p } => p.is_finite() && *p > 0.0,
            AccuracySequence::Constant { eps } => *eps >= 0.0,
            AccuracySequence::Custom { eps } => !eps.is_empty() && eps.iter().all(|e| *e >= 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(ScheduleError::Domain(format!("invalid accuracy sequence {self:?}")))
        }
    }
}

/// Number of inner steps per outer cycle.
#[derive(Debug, Clone, PartialEq)]
pub enum TufSchedule {
    Fixed(u64),
    /// `K_n = ceil(k0 * gamma^(-2n/3))`.
    Geometric {
        k0: u64,
        gamma: f64,
    },
    DesignedFixed {
        n: usize,
        k: u64,
    },
    DesignedGrowing(Vec<u64>),
    /// Inner loops stop once `k >= k_min` and the TD-error statistic drops
    /// to `eps_n`, or at `k_max`.
    AccuracyTriggered {
        k_min: u64,
        k_max: u64,
        accuracy: AccuracySequence,
    },
    Custom(Vec<u64>),
}

impl TufSchedule {
    /// TUF of cycle `n` (0-based); `None` once a finite schedule is exhausted.
    /// For accuracy-triggered schedules this is the cap `k_max`.
    pub fn tuf(&self, n: usize) -> Result<Option<u64>, ScheduleError> {
        let k = match self {
            TufSchedule::Fixed(k) => Some(*k),
            TufSchedule::Geometric { k0, gamma } => Some(geometric_schedule(*k0, *gamma, n as u64)?),
            TufSchedule::DesignedFixed { n: len, k } => (n < *len).then_some(*k),
            TufSchedule::DesignedGrowing(ks) | TufSchedule::Custom(ks) => ks.get(n).copied(),
            TufSchedule::AccuracyTriggered { k_max, .. } => Some(*k_max),
        };
        if k == Some(0) {
            return Err(ScheduleError::Domain(format!("cycle {n} has TUF 0")));
        }
        Ok(k)
    }

    /// Number of cycles for finite schedules.
    pub fn num_cycles(&self) -> Option<usize> {
        match self {
            TufSchedule::DesignedFixed { n, .. } => Some(*n),
            TufSchedule::DesignedGrowing(ks) | TufSchedule::Custom(ks) => Some(ks.len()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        match self {
            TufSchedule::Fixed(0) | TufSchedule::Geometric { k0: 0, .. } => {
                Err(ScheduleError::Domain("TUF must be at least 1".into()))
            }
            TufSchedule::Geometric { gamma, .. } if !(*gamma > 0.0 && *gamma < 1.0) => {
                Err(ScheduleError::Domain(format!("gamma = {gamma} outside (0, 1)")))
            }
            TufSchedule::DesignedFixed { k: 0, .. } => Err(ScheduleError::Domain("TUF must be at least 1".into())),
            TufSchedule::DesignedGrowing(ks) | TufSchedule::Custom(ks) if ks.contains(&0) => {
                Err(ScheduleError::Domain("TUF must be at least 1".into()))
            }
            TufSchedule::AccuracyTriggered { k_min, k_max, accuracy } => {
                if *k_min == 0 || k_min > k_max {
                    return Err(ScheduleError::Domain(format!("need 1 <= k_min <= k_max, got {k_min}, {k_max}")));
                }
                accuracy.validate()
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summability {
    Convergent,
    Divergent,
    Undetermined,
}

/// Advisory check of `sum_n 1/sqrt(K_n) < inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityReport {
    pub horizon: usize,
    pub partial_sum: f64,
    pub verdict: Summability,
    /// Upper bound on the full series when one is known in closed form.
    pub series_bound: Option<f64>,
}

/// Partial sum of `1/sqrt(K_n)` over the first `horizon` cycles plus a
/// verdict. Fixed schedules diverge and geometric ones converge; explicit
/// lists are judged by the log-log decay slope of their terms over the
/// second half of the horizon (slope below -1 means the tail is summable).
pub fn summability_check(schedule: &TufSchedule, horizon: usize) -> Result<SummabilityReport, ScheduleError> {
    if horizon == 0 {
        return Err(ScheduleError::Domain("horizon must be at least 1".into()));
    }
    schedule.validate()?;
    let mut terms = Vec::with_capacity(horizon);
    for n in 0..horizon {
        match schedule.tuf(n)? {
            Some(k) => terms.push(1.0 / (k as f64).sqrt()),
            None => break,
        }
    }
    let partial_sum = terms.iter().sum();
    let (verdict, series_bound) = match schedule {
        TufSchedule::Fixed(_) => (Summability::Divergent, None),
        TufSchedule::Geometric { k0, gamma } => {
            (Summability::Convergent, Some(1.0 / ((1.0 - gamma.cbrt()) * (*k0 as f64).sqrt())))
        }
        TufSchedule::AccuracyTriggered { .. } => (Summability::Undetermined, None),
        _ => (tail_verdict(&terms), None),
    };
    Ok(SummabilityReport { horizon: terms.len(), partial_sum, verdict, series_bound })
}

fn tail_verdict(terms: &[f64]) -> Summability {
    if terms.len() < 4 {
        return Summability::Undetermined;
    }
    let mid = terms.len() / 2;
    let (n0, n1) = (mid as f64 + 1.0, terms.len() as f64);
    let slope = (terms[terms.len() - 1].ln() - terms[mid - 1].ln()) / (n1.ln() - n0.ln());
    if slope < -1.1 {
        Summability::Convergent
    } else if slope > -0.9 {
        Summability::Divergent
    } else {
        Summability::Undetermined
    }
}
