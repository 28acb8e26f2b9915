// Fixed target-update frequencies against geometrically increasing ones at
// an equal sample budget.
//
// `cargo run --release --example periodic_vs_icql`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tufq::learner::{run_icql, run_periodic_q, RunContext};
use tufq::mdp::value_iteration_oracle;
use tufq::schedules::TufSchedule;

const BUDGET: u64 = 300_000;

pub fn run_example() -> Result<Vec<(String, f64)>, Box<dyn std::error::Error>> {
    let mdp = tufq::build_gridworld(0.7)?;
    let q_star = value_iteration_oracle(&mdp, 1e-12)?;
    let ctx = RunContext::new(&mdp).with_oracle(&q_star).with_evaluation(0, 7).with_budget(BUDGET);

    let mut finals = Vec::new();
    for k in [1_000u64, 10_000, 100_000] {
        let trace = run_periodic_q(&mdp.zeros(), &TufSchedule::Fixed(k), &ctx, &mut ChaCha8Rng::seed_from_u64(7))?;
        finals.push((format!("fixed {k}"), trace.final_bias().unwrap()));
    }
    // cycle cap far above what the budget allows; the budget ends the run
    let icql = run_icql(&mdp.zeros(), 1_000, 1_000, &ctx, &mut ChaCha8Rng::seed_from_u64(7))?;
    println!("icql K_n: {:?}", icql.tufs());
    finals.push(("icql 1000".into(), icql.final_bias().unwrap()));

    for (label, bias) in &finals {
        println!("{label:>12}: final bias {bias:.4}");
    }
    let last = icql.records.last().unwrap();
    println!("icql greedy score after {} samples: {:.3}", last.cost, last.score.unwrap());
    Ok(finals)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
