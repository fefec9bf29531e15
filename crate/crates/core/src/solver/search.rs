//! Certified ascent over rank-signature projective measurements.

use nalgebra::{DMatrix, SymmetricEigen};

use super::manifold::{unitary_from_measurement, Landscape};
use super::{finalize, SolveConfig, SolveResult};
use crate::ensembles::Ensemble;
use crate::error::{MedError, Result};
use crate::linalg::{lowdin_orthonormalize, CMatrix, Tolerances};
use crate::pgm::pgm;
use crate::sampling::{haar_unitary, rng_from_seed};

/// Outcome of one ascent run.
pub(crate) struct Ascent {
    pub unitary: CMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<f64>,
}

/// Largest step length in generator coordinates.
const MAX_STEP: f64 = 1.0;
/// Armijo backtracking halvings before giving up on a direction.
const MAX_HALVINGS: usize = 60;
/// Gradients below this are treated as round-off when the line search stalls.
const STALL_GRADIENT: f64 = 1e-9;

/// Ascent from `u0`: Newton steps where the Hessian is negative definite,
/// curvature-rescaled gradient steps otherwise, with Armijo backtracking.
pub(crate) fn ascend(
    land: &Landscape,
    u0: CMatrix,
    config: &SolveConfig,
    tol: &Tolerances,
) -> Ascent {
    let mut u = u0;
    let mut value = land.objective(&u);
    let mut trace = vec![value];
    let n = land.generators().len();
    if n == 0 {
        return Ascent {
            unitary: u,
            iterations: 0,
            converged: true,
            trace,
        };
    }
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        let (grad, hess) = land.derivatives(&u);
        let gnorm = grad.iter().fold(0.0_f64, |acc, g| acc.max(g.abs()));
        if gnorm <= config.grad_tol {
            converged = true;
            break;
        }
        let mut dir = ascent_direction(&grad, hess, n);
        let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > MAX_STEP {
            dir.iter_mut().for_each(|x| *x *= MAX_STEP / len);
        }
        let slope: f64 = grad.iter().zip(&dir).map(|(g, x)| g * x).sum();

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let x: Vec<f64> = dir.iter().map(|v| v * alpha).collect();
            let candidate = land.step(&u, &x);
            let cand_value = land.objective(&candidate);
            if cand_value >= value + config.armijo * alpha * slope {
                accepted = Some((candidate, cand_value));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((candidate, cand_value)) => {
                u = candidate;
                value = cand_value;
                trace.push(value);
                iterations += 1;
                if iterations % 10 == 0 {
                    if let Ok(w) = lowdin_orthonormalize(&u, tol) {
                        u = w;
                        value = land.objective(&u);
                    }
                }
            }
            None => {
                converged = gnorm <= STALL_GRADIENT;
                break;
            }
        }
    }
    if let Ok(w) = lowdin_orthonormalize(&u, tol) {
        u = w;
    }
    Ascent {
        unitary: u,
        iterations,
        converged,
        trace,
    }
}

/// `Σ_k v_k (v_k·g) / max(|λ_k|, floor)` over the Hessian eigenpairs: the
/// Newton step when the Hessian is negative definite, an ascent direction always.
fn ascent_direction(grad: &[f64], hess: Vec<f64>, n: usize) -> Vec<f64> {
    let h = DMatrix::from_row_slice(n, n, &hess);
    let eig = SymmetricEigen::new(h);
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let floor = (1e-6 * scale).max(1e-12);
    let mut dir = vec![0.0; n];
    for k in 0..n {
        let v = eig.eigenvectors.column(k);
        let proj: f64 = v.iter().zip(grad).map(|(a, b)| a * b).sum();
        let lambda = eig.eigenvalues[k];
        let weight = if lambda < -floor {
            1.0 / -lambda
        } else {
            1.0 / lambda.abs().max(floor)
        };
        for (i, d) in dir.iter_mut().enumerate() {
            *d += v[i] * proj * weight;
        }
    }
    dir
}

/// Multi-start certified ascent. Start 0 is the pretty good measurement of
/// `p` (unless `warm_start` is off); the others are seeded Haar-random unitaries.
pub fn solve(p: &Ensemble, config: &SolveConfig, tol: &Tolerances) -> Result<SolveResult> {
    let land = Landscape::new(p);
    let starts = config.restarts.max(1);
    let mut seed_rng = rng_from_seed(config.seed);
    let mut results: Vec<SolveResult> = Vec::with_capacity(starts);
    for index in 0..starts {
        let start_seed: u64 = rand::Rng::random(&mut seed_rng);
        let u0 = if index == 0 && config.warm_start {
            pgm(p, tol)
                .ok()
                .and_then(|m| unitary_from_measurement(&m, tol))
        } else {
            None
        }
        .unwrap_or_else(|| haar_unitary(&mut rng_from_seed(start_seed), p.dim()));
        let run = ascend(&land, u0, config, tol);
        results.push(finalize(p, &land, run, index, tol)?);
    }
    pick_best(results)
}

/// Success probabilities closer than this count as equal when picking a result.
const VALUE_TIE: f64 = 1e-12;

/// Best certified result, else best uncertified; ties go to the lower restart index.
pub(crate) fn pick_best(results: Vec<SolveResult>) -> Result<SolveResult> {
    let mut best: Option<SolveResult> = None;
    for r in results {
        let better = match &best {
            None => true,
            Some(b) => {
                (r.certified && !b.certified)
                    || (r.certified == b.certified && r.success_prob > b.success_prob + VALUE_TIE)
            }
        };
        if better {
            best = Some(r);
        }
    }
    let best = best.expect("at least one restart");
    if !best.certified && !best.converged {
        return Err(MedError::NoConvergence(Box::new(best)));
    }
    Ok(best)
}
