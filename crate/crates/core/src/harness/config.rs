//! TOML configuration for single runs and multi-arm sweeps.
//!
//! A single run:
//!
//! ```toml
//! gamma = 0.7
//! seed = 3
//! budget = 200000
//!
//! [environment]
//! kind = "gridworld"          # or "file" with `path`, or "inline" with `layout`
//!
//! [schedule]
//! kind = "geometric"          # fixed | geometric | designed | atql | custom | file
//! k0 = 1000
//!
//! [step_size]                 # optional, defaults to theory-inverse with 2 / xi
//! kind = "theory-inverse"
//! offset = 104.0
//!
//! [evaluation]                # optional greedy rollout per cycle
//! horizon = 50
//! ```
//!
//! A sweep replaces `seed` and `schedule` with a seed list and arms:
//!
//! ```toml
//! gamma = 0.7
//! seeds = [0, 1, 2, 3]
//! budget = 2000000
//! checkpoints = 100
//!
//! [[arms]]
//! label = "fixed-1000"
//! schedule = { kind = "fixed", k = 1000 }
//!
//! [[arms]]
//! label = "icql-1000"
//! schedule = { kind = "geometric", k0 = 1000 }
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::learner::ExplorationPolicy;
use crate::mdp::RewardTable;
use crate::schedules::{AccuracySequence, DesignFamily, StepSizeSchedule};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnvironmentSpec {
    /// The built-in 4x4 benchmark.
    #[default]
    Gridworld,
    /// A grid environment file; its own `gamma` is replaced by the config's.
    File { path: PathBuf },
    /// A layout given in place, with the built-in rewards unless overridden.
    Inline {
        layout: Vec<String>,
        #[serde(default)]
        rewards: Option<RewardTable>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleSpec {
    Fixed {
        k: u64,
    },
    /// `K_n = ceil(k0 gamma^(-2n/3))` with the environment's `gamma`.
    Geometric {
        k0: u64,
    },
    /// Designed from the environment's constants. `xi` defaults to the
    /// exploration policy's bound, `e0` to `||Q*||_inf` (zero initial table).
    Designed {
        family: DesignFamily,
        eps: f64,
        #[serde(default)]
        xi: Option<f64>,
        #[serde(default)]
        e0: Option<f64>,
    },
    Atql {
        k_min: u64,
        k_max: u64,
        #[serde(default)]
        accuracy: AccuracySequence,
    },
    Custom {
        tufs: Vec<u64>,
    },
    /// A schedule file as written by `tufq design --out`.
    File {
        path: PathBuf,
    },
}

impl ScheduleSpec {
    fn check(&self, who: &str, errors: &mut Vec<String>) {
        match self {
            ScheduleSpec::Fixed { k: 0 } => errors.push(format!("{who}: k must be at least 1")),
            ScheduleSpec::Geometric { k0: 0 } => errors.push(format!("{who}: k0 must be at least 1")),
            ScheduleSpec::Designed { eps, xi, e0, .. } => {
                if !(*eps > 0.0 && eps.is_finite()) {
                    errors.push(format!("{who}: eps must be positive"));
                }
                if xi.is_some_and(|x| !(x > 0.0 && x <= 1.0)) {
                    errors.push(format!("{who}: xi must lie in (0, 1]"));
                }
                if e0.is_some_and(|e| !(e > 0.0 && e.is_finite())) {
                    errors.push(format!("{who}: e0 must be positive"));
                }
            }
            ScheduleSpec::Atql { k_min, k_max, accuracy } => {
                if *k_min == 0 || k_min > k_max {
                    errors.push(format!("{who}: need 1 <= k_min <= k_max"));
                }
                if let Err(e) = accuracy.validate() {
                    errors.push(format!("{who}: {e}"));
                }
            }
            ScheduleSpec::Custom { tufs } if tufs.is_empty() || tufs.contains(&0) => {
                errors.push(format!("{who}: custom TUFs must be non-empty and at least 1"));
            }
            _ => {}
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self, ScheduleSpec::Designed { .. } | ScheduleSpec::Custom { .. } | ScheduleSpec::File { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationSpec {
    /// Rollout start state; defaults to the environment's start cell.
    #[serde(default)]
    pub start: Option<usize>,
    pub horizon: usize,
}

fn yes() -> bool {
    true
}

fn default_checkpoints() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: f64,
    #[serde(default)]
    pub environment: EnvironmentSpec,
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub step_size: Option<StepSizeSchedule>,
    #[serde(default)]
    pub exploration: Option<ExplorationPolicy>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub max_cycles: Option<usize>,
    /// Record the bias against `Q*` every cycle.
    #[serde(default = "yes")]
    pub oracle: bool,
    #[serde(default = "yes")]
    pub record_gap: bool,
    #[serde(default)]
    pub evaluation: Option<EvaluationSpec>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmConfig {
    pub label: String,
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub step_size: Option<StepSizeSchedule>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub gamma: f64,
    #[serde(default)]
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub exploration: Option<ExplorationPolicy>,
    pub seeds: Vec<u64>,
    /// Shared sample budget; every arm stops before the first cycle that
    /// would exceed it.
    pub budget: u64,
    /// Number of cost-grid points, including cost 0 and the budget.
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    #[serde(default = "yes")]
    pub oracle: bool,
    #[serde(default = "yes")]
    pub record_gap: bool,
    #[serde(default)]
    pub evaluation: Option<EvaluationSpec>,
    pub arms: Vec<ArmConfig>,
    /// Default CSV destination.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, HarnessError> {
    toml::from_str(text).map_err(|e| HarnessError::Parse { what: what.into(), message: e.to_string() })
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn parent_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn check_common(
    gamma: f64,
    evaluation: &Option<EvaluationSpec>,
    exploration: &Option<ExplorationPolicy>,
    errors: &mut Vec<String>,
) {
    if !(gamma > 0.0 && gamma < 1.0) {
        errors.push(format!("gamma = {gamma} must lie in (0, 1)"));
    }
    if evaluation.is_some_and(|e| e.horizon == 0) {
        errors.push("evaluation horizon must be at least 1".into());
    }
    if let Some(ExplorationPolicy::EpsilonGreedy { epsilon, xi, .. }) = exploration {
        if !(0.0..=1.0).contains(epsilon) || !(*xi > 0.0 && *xi <= 1.0) {
            errors.push("epsilon-greedy needs epsilon in [0, 1] and xi in (0, 1]".into());
        }
    }
}

fn check_step_size(who: &str, s: &Option<StepSizeSchedule>, errors: &mut Vec<String>) {
    if let Some(Err(e)) = s.as_ref().map(StepSizeSchedule::validate) {
        errors.push(format!("{who}: {e}"));
    }
}

fn finish(errors: Vec<String>) -> Result<(), HarnessError> {
    if errors.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Invalid(errors))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, HarnessError> {
        let mut cfg: RunConfig = parse(text, "run config")?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        Self::from_toml_str(&read(path)?, parent_dir(path))
    }

    /// Collects every violation instead of stopping at the first.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut errors = Vec::new();
        check_common(self.gamma, &self.evaluation, &self.exploration, &mut errors);
        self.schedule.check("schedule", &mut errors);
        check_step_size("step_size", &self.step_size, &mut errors);
        if self.budget == Some(0) {
            errors.push("budget must be at least 1".into());
        }
        if self.budget.is_none() && self.max_cycles.is_none() && !self.schedule.is_finite() {
            errors.push("no stopping rule: set budget or max_cycles, or use a finite schedule".into());
        }
        finish(errors)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, HarnessError> {
        let mut cfg: ExperimentConfig = parse(text, "experiment config")?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        Self::from_toml_str(&read(path)?, parent_dir(path))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut errors = Vec::new();
        check_common(self.gamma, &self.evaluation, &self.exploration, &mut errors);
        if self.seeds.is_empty() {
            errors.push("seeds must not be empty".into());
        }
        let mut seen = HashSet::new();
        for s in &self.seeds {
            if !seen.insert(s) {
                errors.push(format!("seed {s} is repeated"));
            }
        }
        if self.budget == 0 {
            errors.push("budget must be at least 1".into());
        }
        if self.checkpoints < 2 {
            errors.push("checkpoints must be at least 2".into());
        }
        if self.arms.is_empty() {
            errors.push("at least one arm is required".into());
        }
        let mut labels = HashSet::new();
        for (i, arm) in self.arms.iter().enumerate() {
            let who = format!("arm {i} ({})", arm.label);
            if arm.label.trim().is_empty() {
                errors.push(format!("arm {i}: label must not be empty"));
            } else if !labels.insert(arm.label.as_str()) {
                errors.push(format!("{who}: label is repeated"));
            }
            arm.schedule.check(&who, &mut errors);
            check_step_size(&who, &arm.step_size, &mut errors);
        }
        finish(errors)
    }

    /// Single-run configuration of one (arm, seed) cell.
    pub fn run_config(&self, arm: usize, seed: u64) -> RunConfig {
        let a = &self.arms[arm];
        RunConfig {
            gamma: self.gamma,
            environment: self.environment.clone(),
            schedule: a.schedule.clone(),
            step_size: a.step_size.clone(),
            exploration: self.exploration.clone(),
            seed,
            budget: Some(self.budget),
            max_cycles: None,
            oracle: self.oracle,
            record_gap: self.record_gap,
            evaluation: self.evaluation,
            base_dir: self.base_dir.clone(),
        }
    }
}
