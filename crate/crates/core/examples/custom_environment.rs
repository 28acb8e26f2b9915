// Build a grid environment from a TOML description, solve it and learn it
// with increasing target-update frequencies.
//
// `cargo run --release --example custom_environment`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tufq::learner::{run_icql, RunContext};
use tufq::mdp::{evaluate_greedy, value_iteration_oracle, GridWorld};

const CORRIDOR: &str = r#"
gamma = 0.8
layout = ["S..X", "B..G"]

[rewards.default]
kind = "deterministic"
value = -0.05

[rewards.goal]
kind = "two-point"
low = 0.0
high = 2.0
p_high = 0.5

[rewards.stochastic]
kind = "two-point"
low = -1.0
high = 0.8
p_high = 0.5

[rewards.bomb]
kind = "deterministic"
value = -1.0
"#;

pub fn run_example() -> Result<(f64, f64), Box<dyn std::error::Error>> {
    let world = GridWorld::from_toml_str(CORRIDOR)?;
    let mdp = world.mdp();
    println!("{} states, {} active pairs", mdp.num_states(), mdp.num_active());
    let q_star = value_iteration_oracle(mdp, 1e-12)?;
    let best = evaluate_greedy(&q_star, mdp, world.start(), 10)?;

    let ctx = RunContext::new(mdp).with_oracle(&q_star).with_budget(100_000);
    let trace = run_icql(&mdp.zeros(), 200, 100, &ctx, &mut ChaCha8Rng::seed_from_u64(1))?;
    let learned = evaluate_greedy(&trace.final_q, mdp, world.start(), 10)?;
    println!("optimal score {best:.3}, learned score {learned:.3}, final bias {:.4}", trace.final_bias().unwrap());
    Ok((best, learned))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
