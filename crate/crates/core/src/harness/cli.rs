use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::{
    aggregate, emit_csv, run_experiment, run_single, trace_csv, EnvironmentSpec, ExperimentConfig, HarnessError,
    PreparedEnvironment, RunConfig,
};
use crate::learner::ExplorationPolicy;
use crate::mdp::{GridSpec, ACTIONS};
use crate::schedules::{compute_constants, design_fixed_tuf, design_growing_tuf, DesignFamily};

#[derive(Parser, Debug)]
#[command(name = "tufq", version, about = "Q-learning with designed target-update schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print Q* of an environment.
    Oracle {
        /// `gridworld` or a grid environment file.
        #[arg(long, default_value = "gridworld")]
        env: String,
        #[arg(long, default_value_t = 0.7)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Design a TUF schedule for a target accuracy.
    Design {
        #[arg(long, default_value = "gridworld")]
        env: String,
        #[arg(long, default_value_t = 0.7)]
        gamma: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Family::Growing)]
        schedule: Family,
        /// Exploration bound; defaults to uniform sampling over active pairs.
        #[arg(long)]
        xi: Option<f64>,
        /// Initial error; defaults to `||Q*||_inf`.
        #[arg(long)]
        e0: Option<f64>,
        /// Write the schedule file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one configuration and write its per-cycle trace.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a multi-arm, multi-seed experiment and write aggregated CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the built-in grid environment file.
    Gridworld {
        #[arg(long, default_value_t = 0.7)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Fixed,
    Growing,
}

/// Entry point of the `tufq` binary.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    cli_run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`cli_main`] with explicit output streams. Exit codes: 0 success,
/// 1 runtime error, 2 usage error.
pub fn cli_run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn env_spec(env: &str) -> EnvironmentSpec {
    if env == "gridworld" {
        EnvironmentSpec::Gridworld
    } else {
        EnvironmentSpec::File { path: env.into() }
    }
}

fn write_to(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn io(e: std::io::Error) -> HarnessError {
    HarnessError::io("<stdout>", e)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), HarnessError> {
    match command {
        Command::Oracle { env, gamma, out: path } => {
            let env = PreparedEnvironment::load(&env_spec(&env), gamma, Path::new(""))?;
            let q = &env.oracle;
            let mut text = format!("state,{}\n", ACTIONS.join(","));
            for s in 0..q.num_states() {
                let row: Vec<String> = q.row(s).iter().map(|v| format!("{v:.6}")).collect();
                text.push_str(&format!("{s},{}\n", row.join(",")));
            }
            match path {
                Some(p) => write_to(&p, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            let start = env.grid.start();
            for (a, name) in ACTIONS.iter().enumerate() {
                writeln!(out, "Q*(start, {name}) = {:.4}", q.get(start, a)).map_err(io)?;
            }
            Ok(())
        }
        Command::Design { env, gamma, eps, schedule, xi, e0, out: path } => {
            let env = PreparedEnvironment::load(&env_spec(&env), gamma, Path::new(""))?;
            let mdp = env.grid.mdp();
            let xi = xi.unwrap_or(ExplorationPolicy::UniformStateAction.xi(mdp));
            let constants = compute_constants(mdp, xi, &env.oracle)?;
            let e0 = e0.unwrap_or(env.oracle.sup_norm());
            let design = match schedule {
                Family::Fixed => design_fixed_tuf(eps, e0, &constants)?,
                Family::Growing => design_growing_tuf(eps, e0, &constants)?,
            };
            let family = match design.family {
                DesignFamily::Fixed => "fixed",
                DesignFamily::Growing => "growing",
            };
            let report = format!(
                "family: {family}\neps: {eps}\ne0: {e0:.6}\nc1: {:.6e}\nc2: {:.6e}\nmu: {}\nK_min: {:.1}\n\
                 cycles N: {}\nK_j: {:?}\npredicted cost: {}\npredicted error bound: {:.6}\n",
                constants.c1,
                constants.c2,
                constants.mu,
                design.k_min,
                design.n,
                design.tufs,
                design.predicted_cost,
                design.predicted_error_bound,
            );
            out.write_all(report.as_bytes()).map_err(io)?;
            for w in &design.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            if let Some(p) = path {
                let text = toml::to_string(&design)
                    .map_err(|e| HarnessError::Parse { what: "design".into(), message: e.to_string() })?;
                write_to(&p, &text)?;
            }
            Ok(())
        }
        Command::Run { config, seed, out: path } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let trace = run_single(&cfg)?;
            match path {
                Some(p) => {
                    let f = std::fs::File::create(&p).map_err(|e| HarnessError::io(&p, e))?;
                    trace_csv(&trace, std::io::BufWriter::new(f))?;
                }
                None => trace_csv(&trace, &mut *out)?,
            }
            let bias = trace.final_bias().map_or("n/a".to_string(), |b| format!("{b:.6}"));
            writeln!(err, "cycles: {}, samples: {}, final bias: {bias}", trace.num_cycles(), trace.total_cost())
                .map_err(io)?;
            Ok(())
        }
        Command::Sweep { config, out: path } => {
            let cfg = ExperimentConfig::load(&config)?;
            let result = run_experiment(&cfg)?;
            for arm in &result.arms {
                for w in &arm.warnings {
                    writeln!(err, "warning [{}]: {w}", arm.label).map_err(io)?;
                }
            }
            let stats = aggregate(&result, cfg.checkpoints)?;
            match path.or_else(|| cfg.output.as_ref().map(|o| cfg.base_dir.join(o))) {
                Some(p) => super::write_csv(&stats, p)?,
                None => emit_csv(&stats, &mut *out)?,
            }
            Ok(())
        }
        Command::Gridworld { gamma, out: path } => {
            let text = GridSpec::builtin(gamma).to_toml_string();
            match path {
                Some(p) => write_to(&p, &text),
                None => out.write_all(text.as_bytes()).map_err(io),
            }
        }
    }
}
