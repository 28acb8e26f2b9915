use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MdpError;

/// Reward emitted by a single state-action pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RewardDistribution {
    Deterministic {
        value: f64,
    },
    /// `low` with probability `1 - p_high`, `high` with probability `p_high`.
    TwoPoint {
        low: f64,
        high: f64,
        p_high: f64,
    },
}

impl RewardDistribution {
    pub fn deterministic(value: f64) -> Result<Self, MdpError> {
        let d = RewardDistribution::Deterministic { value };
        d.validate()?;
        Ok(d)
    }

    pub fn two_point(low: f64, high: f64, p_high: f64) -> Result<Self, MdpError> {
        let d = RewardDistribution::TwoPoint { low, high, p_high };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), MdpError> {
        match *self {
            RewardDistribution::Deterministic { value } if value.is_finite() => Ok(()),
            RewardDistribution::TwoPoint { low, high, p_high }
                if low.is_finite() && high.is_finite() && (0.0..=1.0).contains(&p_high) =>
            {
                Ok(())
            }
            other => Err(MdpError::Invalid(format!("bad reward distribution {other:?}"))),
        }
    }

    /// Support points and their probabilities.
    pub fn support(&self) -> Vec<(f64, f64)> {
        match *self {
            RewardDistribution::Deterministic { value } => vec![(value, 1.0)],
            RewardDistribution::TwoPoint { low, high, p_high } => {
                vec![(low, 1.0 - p_high), (high, p_high)]
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            RewardDistribution::Deterministic { value } => value,
            RewardDistribution::TwoPoint { low, high, p_high } => (1.0 - p_high) * low + p_high * high,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            RewardDistribution::Deterministic { .. } => 0.0,
            RewardDistribution::TwoPoint { low, high, p_high } => p_high * (1.0 - p_high) * (high - low) * (high - low),
        }
    }

    /// Draws one reward. Consumes exactly one uniform from `rng` for the
    /// two-point kind and nothing for the deterministic kind.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            RewardDistribution::Deterministic { value } => value,
            RewardDistribution::TwoPoint { low, high, p_high } => {
                if rng.random::<f64>() < p_high {
                    high
                } else {
                    low
                }
            }
        }
    }
}
