// Mean squared distance of the inner SGD iterate to `T* Q` against the
// `(c1 ||Q - Q*||^2 + c2) / (k + s)` rate bound.
//
// `cargo run --release --example inner_loop_rate`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tufq::learner::{run_inner_loop_observed, RunContext};
use tufq::mdp::{exact_bellman_apply, sup_distance, value_iteration_oracle};
use tufq::schedules::{compute_constants, StepSizeSchedule};

/// `(k, mean squared error, bound)`.
type Row = (u64, f64, f64);

pub fn run_example() -> Result<Vec<Row>, Box<dyn std::error::Error>> {
    let mdp = tufq::build_gridworld(0.7)?;
    let xi = 1.0 / mdp.num_active() as f64;
    let q_star = value_iteration_oracle(&mdp, 1e-12)?;
    let c = compute_constants(&mdp, xi, &q_star)?;
    let q_in = mdp.zeros();
    let target = exact_bellman_apply(&q_in, &mdp)?;
    let ctx = RunContext::new(&mdp).with_step_sizes(StepSizeSchedule::theory_inverse(xi)?);

    let checkpoints = [100u64, 1_000, 10_000, 50_000];
    let seeds = 10;
    let mut sums = [0.0; 4];
    for seed in 0..seeds {
        run_inner_loop_observed(&q_in, 50_000, &ctx, &mut ChaCha8Rng::seed_from_u64(seed), |k, q| {
            if let Some(i) = checkpoints.iter().position(|&c| c == k) {
                sums[i] += q.l2_sq_distance(&target).unwrap() / seeds as f64;
            }
        })?;
    }
    let bias0 = sup_distance(&q_in, &q_star)?;
    let mut rows = Vec::new();
    for (k, mean) in checkpoints.iter().zip(sums) {
        let bound = c.inner_rate_bound(bias0, *k as f64);
        println!("k = {k:>6}: mean error {mean:.4e}, bound {bound:.4e}");
        rows.push((*k, mean, bound));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
