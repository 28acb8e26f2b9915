//! Quasi-optimal TUF designs.
//!
//! Both designs split the target accuracy evenly between the contraction term
//! `mu^N e0` and the accumulated inner-loop error of the unrolled recursion
//! `e_n <= mu^n e0 + sum_{j<n} mu^(n-1-j) sqrt(c2 / K_j)`. That fixes
//! `N = ceil(log(eps / (2 e0)) / log(mu))`; the designs differ in how the
//! budget for the second term is spread over the cycles.
//!
//! TUFs are designed as reals, then ceiled and clamped to `ceil(K_min)`. The
//! reported error bound is re-evaluated on the integer schedule.

use serde::{Deserialize, Serialize};

use super::tuf::{ceil_snapped, to_count};
use super::{schedule_cost, ScheduleError, TheoryConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignFamily {
    Fixed,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignOutput {
    pub family: DesignFamily,
    pub eps: f64,
    pub e0: f64,
    /// Number of outer cycles.
    pub n: usize,
    /// Real-valued TUFs before ceiling and clamping.
    pub raw_tufs: Vec<f64>,
    pub tufs: Vec<u64>,
    pub predicted_cost: u64,
    pub predicted_error_bound: f64,
    pub mu: f64,
    pub k_min: f64,
    /// How many TUFs were raised to `ceil(k_min)`.
    pub clamped: usize,
    pub warnings: Vec<String>,
}

/// Trajectory of the deterministic error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBound {
    /// `e_0, e_1, ..., e_N`.
    pub per_cycle: Vec<f64>,
}

impl ErrorBound {
    pub fn last(&self) -> f64 {
        *self.per_cycle.last().expect("bound always holds e_0")
    }
}

/// Evaluates `e_{n+1} = mu e_n + sqrt(c2 / K_n)` along `tufs`.
pub fn unroll_error_bound(e0: f64, tufs: &[u64], constants: &TheoryConstants) -> Result<ErrorBound, ScheduleError> {
    let real: Vec<f64> = tufs.iter().map(|&k| k as f64).collect();
    unroll_error_bound_real(e0, &real, constants)
}

pub fn unroll_error_bound_real(
    e0: f64,
    tufs: &[f64],
    constants: &TheoryConstants,
) -> Result<ErrorBound, ScheduleError> {
    let mut per_cycle = Vec::with_capacity(tufs.len() + 1);
    let mut e = e0;
    per_cycle.push(e);
    for (j, &k) in tufs.iter().enumerate() {
        if !(k >= 1.0) {
            return Err(ScheduleError::Domain(format!("K_{j} = {k} is below 1")));
        }
        e = constants.mu * e + (constants.c2 / k).sqrt();
        per_cycle.push(e);
    }
    Ok(ErrorBound { per_cycle })
}

fn outer_cycles(eps: f64, e0: f64, mu: f64) -> Result<usize, ScheduleError> {
    if !(eps > 0.0) || !(e0 > 0.0) || !eps.is_finite() || !e0.is_finite() {
        return Err(ScheduleError::Domain(format!("need eps > 0 and e0 > 0, got {eps}, {e0}")));
    }
    if eps >= 2.0 * e0 {
        return Err(ScheduleError::Degenerate { eps, e0 });
    }
    let n = ceil_snapped((eps / (2.0 * e0)).ln() / mu.ln());
    Ok(n.max(1.0) as usize)
}

fn finish(
    family: DesignFamily,
    eps: f64,
    e0: f64,
    n: usize,
    raw_tufs: Vec<f64>,
    constants: &TheoryConstants,
    mut warnings: Vec<String>,
) -> Result<DesignOutput, ScheduleError> {
    let k_min = constants.k_min();
    let floor = to_count(k_min.ceil(), "K_min")?;
    let mut clamped = 0;
    let mut tufs = Vec::with_capacity(raw_tufs.len());
    for (j, &raw) in raw_tufs.iter().enumerate() {
        let k = to_count(ceil_snapped(raw), &format!("K_{j}"))?;
        if k < floor {
            clamped += 1;
        }
        tufs.push(k.max(floor));
    }
    if clamped > 0 {
        warnings.push(format!("{clamped} of {n} TUFs raised to K_min = {floor}"));
    }
    let predicted_cost = schedule_cost(&tufs)?;
    let predicted_error_bound = unroll_error_bound(e0, &tufs, constants)?.last();
    Ok(DesignOutput {
        family,
        eps,
        e0,
        n,
        raw_tufs,
        tufs,
        predicted_cost,
        predicted_error_bound,
        mu: constants.mu,
        k_min,
        clamped,
        warnings,
    })
}

/// Uniform TUF `K = (4 c2 / eps^2) ((1 - mu^N) / (1 - mu))^2` over `N` cycles.
pub fn design_fixed_tuf(eps: f64, e0: f64, constants: &TheoryConstants) -> Result<DesignOutput, ScheduleError> {
    let mu = constants.mu;
    let n = outer_cycles(eps, e0, mu)?;
    let mut warnings = Vec::new();
    let validity = (1.0 - constants.gamma) * (constants.c2 / constants.c1).sqrt();
    if eps > validity {
        warnings.push(format!(
            "eps = {eps} exceeds (1 - gamma) sqrt(c2 / c1) = {validity:.6}; K >= K_min is not guaranteed"
        ));
    }
    let geo = (1.0 - mu.powi(n as i32)) / (1.0 - mu);
    let k = 4.0 * constants.c2 / (eps * eps) * geo * geo;
    finish(DesignFamily::Fixed, eps, e0, n, vec![k; n], constants, warnings)
}

/// Geometric TUFs `K_j = C mu^((2/3)(N - 1 - j))` with
/// `C = (4 c2 / eps^2) ((1 - mu^(2N/3)) / (1 - mu^(2/3)))^2`.
pub fn design_growing_tuf(eps: f64, e0: f64, constants: &TheoryConstants) -> Result<DesignOutput, ScheduleError> {
    let mu = constants.mu;
    let n = outer_cycles(eps, e0, mu)?;
    let mut warnings = Vec::new();
    let mu23 = mu.powf(2.0 / 3.0);
    let nu = (1.0 - constants.gamma) / (1.0 - mu23);
    let validity = 2.0 * e0 * (nu / (2.0 * e0 + nu)).powf(1.5);
    if eps >= validity {
        warnings.push(format!(
            "eps = {eps} is not below 2 e0 (nu / (2 e0 + nu))^(3/2) = {validity:.6}; K_0 > 4 c2 / (1 - gamma)^2 is not guaranteed"
        ));
    }
    let nf = n as f64;
    let geo = (1.0 - mu.powf(2.0 * nf / 3.0)) / (1.0 - mu23);
    let c = 4.0 * constants.c2 / (eps * eps) * geo * geo;
    let raw = (0..n).map(|j| c * mu.powf(2.0 * (nf - 1.0 - j as f64) / 3.0)).collect();
    finish(DesignFamily::Growing, eps, e0, n, raw, constants, warnings)
}

/// Closed form of the growing design's real-valued total cost,
/// `(eps / (2 sqrt c2))^-2 ((1 - mu^(2N/3)) / (1 - mu^(2/3)))^3`.
pub fn growing_cost_closed_form(eps: f64, n: usize, constants: &TheoryConstants) -> f64 {
    let mu = constants.mu;
    let ratio = eps / (2.0 * constants.c2.sqrt());
    let geo = (1.0 - mu.powf(2.0 * n as f64 / 3.0)) / (1.0 - mu.powf(2.0 / 3.0));
    geo.powi(3) / (ratio * ratio)
}
