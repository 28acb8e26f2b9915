// Accuracy-triggered target updates: each inner loop stops once the mean
// absolute TD error drops below `1 / n^2`.
//
// `cargo run --release --example accuracy_triggered`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tufq::learner::{run_atql, RunContext, StopReason};
use tufq::mdp::value_iteration_oracle;
use tufq::schedules::AccuracySequence;

pub fn run_example() -> Result<Vec<(u64, StopReason)>, Box<dyn std::error::Error>> {
    let mdp = tufq::build_gridworld(0.7)?;
    let q_star = value_iteration_oracle(&mdp, 1e-12)?;
    let ctx = RunContext::new(&mdp).with_oracle(&q_star).with_budget(400_000);
    let accuracy = AccuracySequence::default();
    let trace = run_atql(&mdp.zeros(), 1_000, 100_000, &accuracy, &ctx, &mut ChaCha8Rng::seed_from_u64(3))?;

    println!("{:>5} {:>8} {:>9} {:>10} {:>8}", "cycle", "steps", "stop", "M", "bias");
    let mut cycles = Vec::new();
    for r in &trace.records {
        let Some(inner) = r.inner else { continue };
        println!(
            "{:>5} {:>8} {:>9} {:>10.5} {:>8.4}",
            r.cycle,
            inner.steps,
            format!("{:?}", inner.stop).to_lowercase(),
            inner.final_m.unwrap(),
            r.bias.unwrap()
        );
        cycles.push((inner.steps, inner.stop));
    }
    println!("final bias {:.4} after {} samples", trace.final_bias().unwrap(), trace.total_cost());
    Ok(cycles)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
