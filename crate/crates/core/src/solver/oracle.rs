//! Brute-force reference solver for small instances.
//!
//! A dense grid over the generator coordinates (around the computational
//! basis) locates candidate basins; each of the best grid points is then
//! refined by cyclic single-angle maximization. Along one generator the
//! success probability is exactly `α + β cos 2θ + γ sin 2θ`, so every
//! coordinate update is solved in closed form from three evaluations. No
//! derivatives are used anywhere, which keeps this path independent of the
//! ascent solver.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::manifold::Landscape;
use super::search::{pick_best, Ascent};
use super::{finalize, SolveResult};
use crate::ensembles::Ensemble;
use crate::error::{MedError, Result};
use crate::linalg::{CMatrix, Tolerances};

#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    /// Upper bound on the number of grid evaluations.
    pub grid_points: usize,
    /// Number of best grid points refined.
    pub refine_top: usize,
    /// Sweep cap per refinement.
    pub max_sweeps: usize,
    /// Refinement stops once every coordinate's first-order coefficient is below this.
    pub coordinate_tol: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            grid_points: 50_000,
            refine_top: 4,
            max_sweeps: 20_000,
            coordinate_tol: 1e-14,
        }
    }
}

pub const ORACLE_MAX_DIM: usize = 4;
pub const ORACLE_MAX_STATES: usize = 3;

pub fn solve_oracle(p: &Ensemble, budget: &OracleBudget, tol: &Tolerances) -> Result<SolveResult> {
    if p.dim() > ORACLE_MAX_DIM || p.len() > ORACLE_MAX_STATES {
        return Err(MedError::BudgetExceeded(format!(
            "oracle handles d ≤ {ORACLE_MAX_DIM} and m ≤ {ORACLE_MAX_STATES}, got d = {}, m = {}",
            p.dim(),
            p.len()
        )));
    }
    let land = Landscape::new(p);
    let n = land.generators().len();
    let per_axis = points_per_axis(n, budget.grid_points);
    if per_axis < 2 {
        return Err(MedError::BudgetExceeded(format!(
            "{} grid points cannot cover {n} coordinates",
            budget.grid_points
        )));
    }

    let total = per_axis.pow(n as u32);
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(total);
    let mut x = vec![0.0; n];
    for index in 0..total {
        grid_point(index, per_axis, &mut x);
        let u = land.step(&CMatrix::identity(p.dim(), p.dim()), &x);
        scored.push((land.objective(&u), index));
    }
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });

    let mut results = Vec::new();
    for (rank, &(_, index)) in scored.iter().take(budget.refine_top.max(1)).enumerate() {
        grid_point(index, per_axis, &mut x);
        let u0 = land.step(&CMatrix::identity(p.dim(), p.dim()), &x);
        let run = refine(&land, u0, budget);
        results.push(finalize(p, &land, run, rank, tol)?);
    }
    pick_best(results)
}

fn points_per_axis(n: usize, budget: usize) -> usize {
    if n == 0 {
        return 2;
    }
    let mut g = 1usize;
    while (g + 1).checked_pow(n as u32).is_some_and(|t| t <= budget) {
        g += 1;
    }
    g
}

fn grid_point(mut index: usize, per_axis: usize, x: &mut [f64]) {
    let step = PI / per_axis as f64;
    for xk in x.iter_mut() {
        let j = index % per_axis;
        index /= per_axis;
        *xk = -FRAC_PI_2 + (j as f64 + 0.5) * step;
    }
}

/// Cyclic exact maximization along each generator.
fn refine(land: &Landscape, mut u: CMatrix, budget: &OracleBudget) -> Ascent {
    let mut value = land.objective(&u);
    let mut trace = vec![value];
    let mut converged = land.generators().is_empty();
    let mut sweeps = 0;
    while !converged && sweeps < budget.max_sweeps {
        sweeps += 1;
        let mut largest: f64 = 0.0;
        for g in land.generators() {
            let mut plus = u.clone();
            g.rotate(&mut plus, FRAC_PI_4);
            let mut minus = u.clone();
            g.rotate(&mut minus, -FRAC_PI_4);
            let f_plus = land.objective(&plus);
            let f_minus = land.objective(&minus);
            let alpha = 0.5 * (f_plus + f_minus);
            let gamma = 0.5 * (f_plus - f_minus);
            let beta = value - alpha;
            largest = largest.max(gamma.abs());
            let theta = 0.5 * gamma.atan2(beta);
            let mut next = u.clone();
            g.rotate(&mut next, theta);
            let next_value = land.objective(&next);
            if next_value >= value {
                u = next;
                value = next_value;
            }
        }
        trace.push(value);
        converged = largest <= budget.coordinate_tol;
    }
    Ascent {
        unitary: u,
        iterations: sweeps,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(points_per_axis(2, 50_000), 223);
        assert_eq!(points_per_axis(6, 50_000), 6);
        assert_eq!(points_per_axis(10, 50_000), 2);
        assert_eq!(points_per_axis(10, 1000), 1);
    }
}
