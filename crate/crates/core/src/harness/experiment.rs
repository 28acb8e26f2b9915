use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use super::{EnvironmentSpec, ExperimentConfig, HarnessError, RunConfig, ScheduleSpec};
use crate::learner::{run_schedule, ExplorationPolicy, RunContext, RunTrace};
use crate::mdp::{value_iteration_oracle, GridSpec, GridWorld, QTable, DEFAULT_ORACLE_TOL};
use crate::schedules::{
    compute_constants, design_fixed_tuf, design_growing_tuf, DesignFamily, StepSizeSchedule, TufSchedule,
};

/// An environment with its `Q*`, loaded once and shared by every run.
#[derive(Debug, Clone)]
pub struct PreparedEnvironment {
    pub grid: GridWorld,
    pub oracle: QTable,
}

impl PreparedEnvironment {
    pub fn load(spec: &EnvironmentSpec, gamma: f64, base_dir: &Path) -> Result<Self, HarnessError> {
        let grid_spec = match spec {
            EnvironmentSpec::Gridworld => GridSpec::builtin(gamma),
            EnvironmentSpec::File { path } => {
                let path = base_dir.join(path);
                let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
                GridSpec { gamma, ..GridSpec::from_toml_str(&text)? }
            }
            EnvironmentSpec::Inline { layout, rewards } => {
                GridSpec { gamma, layout: layout.clone(), rewards: rewards.unwrap_or(GridSpec::builtin(gamma).rewards) }
            }
        };
        let grid = GridWorld::from_spec(grid_spec)?;
        let oracle = value_iteration_oracle(grid.mdp(), DEFAULT_ORACLE_TOL)?;
        Ok(PreparedEnvironment { grid, oracle })
    }

    /// Turns a schedule spec into a concrete schedule, with any designer
    /// warnings.
    pub fn resolve_schedule(
        &self,
        spec: &ScheduleSpec,
        policy: &ExplorationPolicy,
        base_dir: &Path,
    ) -> Result<(TufSchedule, Vec<String>), HarnessError> {
        let mdp = self.grid.mdp();
        let schedule = match spec {
            ScheduleSpec::Fixed { k } => TufSchedule::Fixed(*k),
            ScheduleSpec::Geometric { k0 } => TufSchedule::Geometric { k0: *k0, gamma: mdp.gamma() },
            ScheduleSpec::Designed { family, eps, xi, e0 } => {
                let constants = compute_constants(mdp, xi.unwrap_or(policy.xi(mdp)), &self.oracle)?;
                let e0 = e0.unwrap_or(self.oracle.sup_norm());
                let design = match family {
                    DesignFamily::Fixed => design_fixed_tuf(*eps, e0, &constants)?,
                    DesignFamily::Growing => design_growing_tuf(*eps, e0, &constants)?,
                };
                return Ok((to_schedule(*family, design.tufs), design.warnings));
            }
            ScheduleSpec::Atql { k_min, k_max, accuracy } => {
                TufSchedule::AccuracyTriggered { k_min: *k_min, k_max: *k_max, accuracy: accuracy.clone() }
            }
            ScheduleSpec::Custom { tufs } => TufSchedule::Custom(tufs.clone()),
            ScheduleSpec::File { path } => load_schedule_file(&base_dir.join(path))?,
        };
        schedule.validate()?;
        Ok((schedule, Vec::new()))
    }

    fn context<'a>(
        &'a self,
        step_size: &Option<StepSizeSchedule>,
        policy: &ExplorationPolicy,
        cfg: &RunConfig,
    ) -> Result<RunContext<'a>, HarnessError> {
        let mdp = self.grid.mdp();
        let step_sizes = match step_size {
            Some(s) => s.clone(),
            None => StepSizeSchedule::theory_inverse(policy.xi(mdp))?,
        };
        let mut ctx = RunContext::new(mdp).with_step_sizes(step_sizes).with_policy(policy.clone());
        ctx.record_gap = cfg.record_gap;
        ctx.budget = cfg.budget;
        ctx.max_cycles = cfg.max_cycles;
        if cfg.oracle {
            ctx = ctx.with_oracle(&self.oracle);
        }
        if let Some(e) = cfg.evaluation {
            ctx = ctx.with_evaluation(e.start.unwrap_or(self.grid.start()), e.horizon);
        }
        Ok(ctx)
    }

    fn run(&self, cfg: &RunConfig, schedule: &TufSchedule) -> Result<RunTrace, HarnessError> {
        let policy = cfg.exploration.clone().unwrap_or(ExplorationPolicy::UniformStateAction);
        let ctx = self.context(&cfg.step_size, &policy, cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(run_schedule(&self.grid.mdp().zeros(), schedule, &ctx, &mut rng)?)
    }
}

fn to_schedule(family: DesignFamily, tufs: Vec<u64>) -> TufSchedule {
    match family {
        DesignFamily::Fixed => TufSchedule::DesignedFixed { n: tufs.len(), k: tufs.first().copied().unwrap_or(1) },
        DesignFamily::Growing => TufSchedule::DesignedGrowing(tufs),
    }
}

#[derive(Deserialize)]
struct ScheduleFile {
    tufs: Vec<u64>,
    #[serde(default)]
    family: Option<DesignFamily>,
}

fn load_schedule_file(path: &Path) -> Result<TufSchedule, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let file: ScheduleFile = toml::from_str(&text)
        .map_err(|e| HarnessError::Parse { what: path.display().to_string(), message: e.to_string() })?;
    let schedule = match file.family {
        Some(DesignFamily::Fixed) if file.tufs.windows(2).all(|w| w[0] == w[1]) => {
            to_schedule(DesignFamily::Fixed, file.tufs)
        }
        Some(DesignFamily::Growing) => to_schedule(DesignFamily::Growing, file.tufs),
        _ => TufSchedule::Custom(file.tufs),
    };
    if schedule.num_cycles() == Some(0) {
        return Err(HarnessError::Invalid(vec![format!("{}: empty schedule", path.display())]));
    }
    Ok(schedule)
}

/// One run from a single-run config.
pub fn run_single(cfg: &RunConfig) -> Result<RunTrace, HarnessError> {
    cfg.validate()?;
    let env = PreparedEnvironment::load(&cfg.environment, cfg.gamma, &cfg.base_dir)?;
    let policy = cfg.exploration.clone().unwrap_or(ExplorationPolicy::UniformStateAction);
    let (schedule, _) = env.resolve_schedule(&cfg.schedule, &policy, &cfg.base_dir)?;
    env.run(cfg, &schedule)
}

#[derive(Debug, Clone)]
pub struct ArmResult {
    pub label: String,
    pub schedule: TufSchedule,
    pub warnings: Vec<String>,
    /// One trace per seed, in the config's seed order.
    pub traces: Vec<RunTrace>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub seeds: Vec<u64>,
    pub budget: u64,
    pub arms: Vec<ArmResult>,
}

/// Runs every (arm, seed) cell in parallel. Arms share seeds, so their runs
/// are paired; the result does not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    let env = PreparedEnvironment::load(&cfg.environment, cfg.gamma, &cfg.base_dir)?;
    let policy = cfg.exploration.clone().unwrap_or(ExplorationPolicy::UniformStateAction);
    let schedules = cfg
        .arms
        .iter()
        .map(|a| env.resolve_schedule(&a.schedule, &policy, &cfg.base_dir))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(usize, u64)> = (0..cfg.arms.len()).flat_map(|a| cfg.seeds.iter().map(move |&s| (a, s))).collect();
    let traces = cells
        .par_iter()
        .map(|&(arm, seed)| env.run(&cfg.run_config(arm, seed), &schedules[arm].0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut traces = traces.into_iter();
    let arms = cfg
        .arms
        .iter()
        .zip(schedules)
        .map(|(arm, (schedule, warnings))| ArmResult {
            label: arm.label.clone(),
            schedule,
            warnings,
            traces: traces.by_ref().take(cfg.seeds.len()).collect(),
        })
        .collect();
    Ok(ExperimentResult { seeds: cfg.seeds.clone(), budget: cfg.budget, arms })
}
