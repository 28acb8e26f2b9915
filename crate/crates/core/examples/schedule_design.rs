// Design fixed and geometrically growing TUF schedules for a target
// accuracy and compare their sample costs.
//
// `cargo run --example schedule_design`

use tufq::mdp::value_iteration_oracle;
use tufq::schedules::{
    compute_constants, design_fixed_tuf, design_growing_tuf, summability_check, unroll_error_bound, TufSchedule,
};

pub fn run_example() -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
    let mdp = tufq::build_gridworld(0.7)?;
    let q_star = value_iteration_oracle(&mdp, 1e-12)?;
    let c = compute_constants(&mdp, 1.0 / mdp.num_active() as f64, &q_star)?;
    let e0 = q_star.sup_norm();
    println!("c1 = {:.4e}, c2 = {:.4e}, mu = {}, K_min = {:.0}", c.c1, c.c2, c.mu, c.k_min());

    let mut ratios = Vec::new();
    println!("{:>6} {:>4} {:>16} {:>16} {:>7}", "eps", "N", "fixed cost", "growing cost", "ratio");
    for eps in [0.5, 0.1, 0.05, 0.01] {
        let fixed = design_fixed_tuf(eps, e0, &c)?;
        let growing = design_growing_tuf(eps, e0, &c)?;
        let ratio = fixed.predicted_cost as f64 / growing.predicted_cost as f64;
        println!("{eps:>6} {:>4} {:>16} {:>16} {ratio:>7.3}", growing.n, fixed.predicted_cost, growing.predicted_cost);
        let bound = unroll_error_bound(e0, &growing.tufs, &c)?;
        assert!(bound.last() <= eps);
        for w in fixed.warnings.iter().chain(&growing.warnings) {
            println!("       warning: {w}");
        }
        ratios.push((eps, ratio));
    }

    for schedule in [TufSchedule::Fixed(1000), TufSchedule::Geometric { k0: 1000, gamma: 0.7 }] {
        let report = summability_check(&schedule, 60)?;
        println!("{schedule:?}: sum 1/sqrt(K_n) over 60 cycles = {:.4} ({:?})", report.partial_sum, report.verdict);
    }
    Ok(ratios)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
