// A small multi-seed sweep aggregated on a shared cost grid and written as
// CSV.
//
// `cargo run --release --example sweep_csv [out.csv]`

use tufq::harness::{aggregate, emit_csv, run_experiment, AggregateStats, ExperimentConfig};

const CONFIG: &str = r#"
gamma = 0.7
seeds = [0, 1, 2, 3, 4, 5, 6, 7]
budget = 100000
checkpoints = 11

[evaluation]
horizon = 7

[[arms]]
label = "fixed-1000"
schedule = { kind = "fixed", k = 1000 }

[[arms]]
label = "icql-1000"
schedule = { kind = "geometric", k0 = 1000 }

[[arms]]
label = "atql"
schedule = { kind = "atql", k_min = 1000, k_max = 50000 }
"#;

pub fn run_example() -> Result<AggregateStats, Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG, ".")?;
    let result = run_experiment(&cfg)?;
    let stats = aggregate(&result, cfg.checkpoints)?;
    match std::env::args().nth(1) {
        Some(path) => tufq::harness::write_csv(&stats, path)?,
        None => emit_csv(&stats, std::io::stdout().lock())?,
    }
    Ok(stats)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
