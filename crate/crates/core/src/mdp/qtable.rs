use serde::{Deserialize, Serialize};

use super::MdpError;

/// Dense `num_states x num_actions` table of action values, row-major.
///
/// Rows of terminal states are kept at zero by every operator in this crate,
/// so norms over the full table coincide with norms over the active pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTable {
    num_states: usize,
    num_actions: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn zeros(num_states: usize, num_actions: usize) -> Self {
        Self::filled(num_states, num_actions, 0.0)
    }

    pub fn filled(num_states: usize, num_actions: usize, value: f64) -> Self {
        QTable { num_states, num_actions, values: vec![value; num_states * num_actions] }
    }

    pub fn from_vec(num_states: usize, num_actions: usize, values: Vec<f64>) -> Result<Self, MdpError> {
        if values.len() != num_states * num_actions {
            return Err(MdpError::Dimension { expected: (num_states, num_actions), got: (values.len(), 1) });
        }
        Ok(QTable { num_states, num_actions, values })
    }

    pub fn from_fn(num_states: usize, num_actions: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(num_states * num_actions);
        for s in 0..num_states {
            for a in 0..num_actions {
                values.push(f(s, a));
            }
        }
        QTable { num_states, num_actions, values }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.num_states, self.num_actions)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    #[inline]
    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.num_actions + action]
    }

    #[inline]
    pub fn set(&mut self, state: usize, action: usize, value: f64) {
        self.values[state * self.num_actions + action] = value;
    }

    pub fn row(&self, state: usize) -> &[f64] {
        let start = state * self.num_actions;
        &self.values[start..start + self.num_actions]
    }

    #[inline]
    pub fn max_row(&self, state: usize) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Greedy action; ties go to the lowest action index.
    pub fn argmax_row(&self, state: usize) -> usize {
        let row = self.row(state);
        let mut best = 0;
        for (a, &v) in row.iter().enumerate().skip(1) {
            if v > row[best] {
                best = a;
            }
        }
        best
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_shape(&self, expected: (usize, usize)) -> Result<(), MdpError> {
        if self.shape() == expected {
            Ok(())
        } else {
            Err(MdpError::Dimension { expected, got: self.shape() })
        }
    }

    /// `max |q|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Squared Euclidean distance over all entries.
    pub fn l2_sq_distance(&self, other: &QTable) -> Result<f64, MdpError> {
        other.check_shape(self.shape())?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b) * (a - b)).sum())
    }
}

/// `||q1 - q2||_inf`.
pub fn sup_distance(q1: &QTable, q2: &QTable) -> Result<f64, MdpError> {
    q2.check_shape(q1.shape())?;
    Ok(q1.values.iter().zip(&q2.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}
