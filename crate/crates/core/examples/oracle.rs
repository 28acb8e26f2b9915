// Solve the built-in GridWorld exactly and roll out the greedy policy.
//
// `cargo run --example oracle`

use tufq::mdp::{evaluate_greedy, value_iteration_oracle, GridWorld, ACTIONS};

pub fn run_example() -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
    let mut start_values = Vec::new();
    for gamma in [0.7, 0.9, 0.95] {
        let world = GridWorld::builtin(gamma)?;
        let q_star = value_iteration_oracle(world.mdp(), 1e-12)?;
        let start = world.start();
        println!("gamma = {gamma}");
        for (a, name) in ACTIONS.iter().enumerate() {
            println!("  Q*(start, {name:>5}) = {:+.4}", q_star.get(start, a));
        }
        // seven steps reach the goal and collect its reward
        let score = evaluate_greedy(&q_star, world.mdp(), start, 7)?;
        println!("  greedy score over 7 steps = {score:.3}, ||Q*|| = {:.3}", q_star.sup_norm());
        start_values.push((gamma, q_star.get(start, 3)));
    }
    Ok(start_values)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
