//! Rectangular grid environments and the built-in stochastic 4x4 benchmark.
//!
//! Dynamics:
//! - four actions `up, down, left, right`; a move off the grid keeps the
//!   agent in place;
//! - the reward is attached to the cell being left and is the same for every
//!   action taken there;
//! - moving into a bomb pays the bomb reward instead and ends the episode
//!   (bomb cells are terminal, so they have no active pairs);
//! - any action taken in the goal pays the goal reward and ends the episode.
//!
//! Environment files are TOML:
//!
//! ```toml
//! gamma = 0.7
//! layout = ["S.B.", "....", "XXB.", "XXBG"]
//!
//! [rewards.default]
//! kind = "two-point"
//! low = -0.08
//! high = 0.05
//! p_high = 0.5
//!
//! [rewards.bomb]
//! kind = "deterministic"
//! value = -3.0
//! # ... `goal` and `stochastic` likewise
//! ```
//!
//! Layout characters: `S` start (default reward), `.` default, `X`
//! stochastic region, `B` bomb, `G` goal. Exactly one `S` is required.

use serde::{Deserialize, Serialize};

use super::{MdpError, Outcome, RewardDistribution, TabularMdp};

pub const ACTIONS: [&str; 4] = ["up", "down", "left", "right"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRole {
    Start,
    Default,
    Stochastic,
    Bomb,
    Goal,
}

impl CellRole {
    fn parse(c: char) -> Option<Self> {
        Some(match c {
            'S' => CellRole::Start,
            '.' => CellRole::Default,
            'X' => CellRole::Stochastic,
            'B' => CellRole::Bomb,
            'G' => CellRole::Goal,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardTable {
    pub default: RewardDistribution,
    pub goal: RewardDistribution,
    pub stochastic: RewardDistribution,
    pub bomb: RewardDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub gamma: f64,
    /// One string per row, top row first.
    pub layout: Vec<String>,
    pub rewards: RewardTable,
}

impl GridSpec {
    /// The stochastic 4x4 benchmark: start top-left, bombs in column 2
    /// (rows 0, 2, 3), goal bottom-right, high-variance 2x2 block bottom-left.
    pub fn builtin(gamma: f64) -> Self {
        GridSpec {
            gamma,
            layout: ["S.B.", "....", "XXB.", "XXBG"].map(String::from).to_vec(),
            rewards: RewardTable {
                default: RewardDistribution::TwoPoint { low: -0.08, high: 0.05, p_high: 0.5 },
                goal: RewardDistribution::TwoPoint { low: 0.5, high: 1.5, p_high: 0.5 },
                stochastic: RewardDistribution::TwoPoint { low: -2.1, high: 2.0, p_high: 0.5 },
                bomb: RewardDistribution::Deterministic { value: -3.0 },
            },
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, MdpError> {
        toml::from_str(text).map_err(|e| MdpError::Spec(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        // plain data; serialization cannot fail
        toml::to_string(self).expect("grid spec serializes")
    }

    pub fn build(&self) -> Result<GridWorld, MdpError> {
        GridWorld::from_spec(self.clone())
    }
}

/// A grid environment together with its compiled MDP.
#[derive(Debug, Clone)]
pub struct GridWorld {
    spec: GridSpec,
    rows: usize,
    cols: usize,
    roles: Vec<CellRole>,
    start: usize,
    mdp: TabularMdp,
}

impl GridWorld {
    pub fn builtin(gamma: f64) -> Result<Self, MdpError> {
        Self::from_spec(GridSpec::builtin(gamma))
    }

    pub fn from_spec(spec: GridSpec) -> Result<Self, MdpError> {
        let rows = spec.layout.len();
        let cols = spec.layout.first().map_or(0, |r| r.chars().count());
        if rows == 0 || cols == 0 {
            return Err(MdpError::Spec("empty layout".into()));
        }
        let mut roles = Vec::with_capacity(rows * cols);
        for (i, line) in spec.layout.iter().enumerate() {
            if line.chars().count() != cols {
                return Err(MdpError::Spec(format!("layout row {i} has a different width")));
            }
            for c in line.chars() {
                roles.push(CellRole::parse(c).ok_or_else(|| MdpError::Spec(format!("unknown cell character {c:?}")))?);
            }
        }
        let starts: Vec<usize> = (0..roles.len()).filter(|&i| roles[i] == CellRole::Start).collect();
        let start = match starts.as_slice() {
            [s] => *s,
            _ => return Err(MdpError::Spec(format!("expected exactly one start cell, found {}", starts.len()))),
        };
        for r in [spec.rewards.default, spec.rewards.goal, spec.rewards.stochastic, spec.rewards.bomb] {
            r.validate().map_err(|e| MdpError::Spec(e.to_string()))?;
        }

        let n = rows * cols;
        let terminal: Vec<bool> = roles.iter().map(|&r| r == CellRole::Bomb).collect();
        let mut outcomes = Vec::with_capacity(n * ACTIONS.len());
        for s in 0..n {
            let (row, col) = (s / cols, s % cols);
            for a in 0..ACTIONS.len() {
                let outcome = match roles[s] {
                    CellRole::Bomb => None,
                    CellRole::Goal => Some(Outcome { reward: spec.rewards.goal, next: None }),
                    role => {
                        let next = step(row, col, a, rows, cols);
                        let next = next.0 * cols + next.1;
                        let reward = if roles[next] == CellRole::Bomb {
                            spec.rewards.bomb
                        } else if role == CellRole::Stochastic {
                            spec.rewards.stochastic
                        } else {
                            spec.rewards.default
                        };
                        Some(Outcome { reward, next: Some(next) })
                    }
                };
                outcomes.push(outcome);
            }
        }
        let mdp = TabularMdp::new(n, ACTIONS.len(), spec.gamma, terminal, outcomes)?;
        Ok(GridWorld { spec, rows, cols, roles, start, mdp })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, MdpError> {
        Self::from_spec(GridSpec::from_toml_str(text)?)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn mdp(&self) -> &TabularMdp {
        &self.mdp
    }

    pub fn into_mdp(self) -> TabularMdp {
        self.mdp
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn state(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn role(&self, state: usize) -> CellRole {
        self.roles[state]
    }
}

fn step(row: usize, col: usize, action: usize, rows: usize, cols: usize) -> (usize, usize) {
    match action {
        0 if row > 0 => (row - 1, col),
        1 if row + 1 < rows => (row + 1, col),
        2 if col > 0 => (row, col - 1),
        3 if col + 1 < cols => (row, col + 1),
        _ => (row, col),
    }
}

/// MDP of the built-in 4x4 benchmark.
pub fn build_gridworld(gamma: f64) -> Result<TabularMdp, MdpError> {
    Ok(GridWorld::builtin(gamma)?.into_mdp())
}
