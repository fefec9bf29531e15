//! Certified optimal measurements.
//!
//! [`solve`] runs a multi-start ascent over projective measurements of the
//! ensemble's rank signature and hands the best candidate to
//! [`certify_simplified`](crate::certify::certify_simplified). The
//! certificate, not the optimizer's convergence flag, decides whether a
//! result counts as optimal. [`solve_oracle`] is an independent brute-force
//! search for small instances, and [`helstrom_comparator`] a closed spectral
//! construction for two states.

mod fixed_point;
mod manifold;
mod oracle;
mod search;

pub use fixed_point::{fixed_point_from_root, generate_fixed_point};
pub use oracle::{solve_oracle, OracleBudget, ORACLE_MAX_DIM, ORACLE_MAX_STATES};
pub use search::solve;

use crate::belavkin::{dual_operator, DualCertificate};
use crate::certify::{certify_simplified, CertificationReport, Verdict};
use crate::ensembles::{success_probability, Ensemble, ProjectiveMeasurement};
use crate::error::{MedError, Result};
use crate::linalg::{projector_from_columns, HermitianMatrix, Tolerances};

/// Largest accepted gap between primal and dual values of a certified result.
pub const DUALITY_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Number of starts, the pretty good measurement included when `warm_start` is set.
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Max-norm gradient threshold for convergence.
    pub grad_tol: f64,
    /// Armijo sufficient-increase parameter.
    pub armijo: f64,
    /// Start 0 from the pretty good measurement; otherwise every start is random.
    pub warm_start: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            max_iters: 500,
            grad_tol: 1e-12,
            armijo: 1e-4,
            warm_start: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub measurement: ProjectiveMeasurement,
    pub certificate: DualCertificate,
    pub report: CertificationReport,
    pub success_prob: f64,
    /// Ascent iterations (or oracle sweeps) of the returned run.
    pub iterations: usize,
    pub certified: bool,
    /// Whether the optimizer itself reported convergence.
    pub converged: bool,
    /// Index of the start that produced this result.
    pub restart: usize,
    /// Objective value after every accepted step of the returned run.
    pub objective_trace: Vec<f64>,
}

/// Something that produces certified optimal measurements.
pub trait Solver {
    fn solve(&self, p: &Ensemble, tol: &Tolerances) -> Result<SolveResult>;
}

/// The multi-start ascent solver.
#[derive(Debug, Clone, Default)]
pub struct SearchSolver(pub SolveConfig);

impl Solver for SearchSolver {
    fn solve(&self, p: &Ensemble, tol: &Tolerances) -> Result<SolveResult> {
        solve(p, &self.0, tol)
    }
}

/// The brute-force oracle.
#[derive(Debug, Clone, Default)]
pub struct OracleSolver(pub OracleBudget);

impl Solver for OracleSolver {
    fn solve(&self, p: &Ensemble, tol: &Tolerances) -> Result<SolveResult> {
        solve_oracle(p, &self.0, tol)
    }
}

pub(crate) fn finalize(
    p: &Ensemble,
    land: &manifold::Landscape,
    run: search::Ascent,
    restart: usize,
    tol: &Tolerances,
) -> Result<SolveResult> {
    let measurement = land.measurement(&run.unitary);
    let certificate = dual_operator(p, &measurement)?;
    let report = certify_simplified(p, &measurement, tol)?;
    let success_prob = success_probability(p, &measurement, tol)?;
    let certified = report.verdict == Verdict::Optimal
        && (success_prob - certificate.dual_value).abs() <= DUALITY_GAP_TOL;
    Ok(SolveResult {
        measurement,
        certificate,
        report,
        success_prob,
        iterations: run.iterations,
        certified,
        converged: run.converged,
        restart,
        objective_trace: run.trace,
    })
}

/// Success probability of the two-state measurement `{Π, Id − Π}` with `Π`
/// the projector onto the nonnegative eigenspace of `p₁ρ₁ − p₂ρ₂`.
pub fn helstrom_comparator(p: &Ensemble, tol: &Tolerances) -> Result<f64> {
    if p.len() != 2 {
        return Err(MedError::NotTwoState(p.len()));
    }
    let diff = p.weighted(0).sub(&p.weighted(1));
    let eig = diff.eigh();
    let nonneg = eig.values.iter().filter(|&&v| v >= 0.0).count();
    let d = p.dim();
    let first = projector_from_columns(&eig.columns(0, nonneg));
    let second = HermitianMatrix::identity(d).sub(&first);
    let m = crate::ensembles::GeneralPOVM::from_elements_unchecked(vec![first, second]);
    success_probability(p, &m, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{random_ensemble, validate_ensemble};
    use crate::linalg::CMatrix;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn pure_pair(theta: f64, priors: [f64; 2]) -> Ensemble {
        let a = CMatrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
        let b = CMatrix::from_column_slice(2, 1, &[c(theta.cos()), c(theta.sin())]);
        validate_ensemble(&priors, vec![&a * a.adjoint(), &b * b.adjoint()], &tol()).unwrap()
    }

    /// Independent scalar oracle: maximize over measurement angle φ of the
    /// projector onto (cos φ, sin φ) by a fine scan plus golden-section search.
    fn scalar_max(theta: f64, priors: [f64; 2]) -> f64 {
        let f = |phi: f64| {
            let first = phi.cos().powi(2);
            let overlap = (phi - theta).cos().powi(2);
            priors[0] * first + priors[1] * (1.0 - overlap)
        };
        let n = 20_000;
        let (mut best_phi, mut best) = (0.0, f64::MIN);
        for k in 0..n {
            let phi = std::f64::consts::PI * k as f64 / n as f64;
            if f(phi) > best {
                best = f(phi);
                best_phi = phi;
            }
        }
        let h = std::f64::consts::PI / n as f64;
        let (mut lo, mut hi) = (best_phi - h, best_phi + h);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - r * (hi - lo);
            let b = lo + r * (hi - lo);
            if f(a) > f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn scalar_oracle_matches_closed_form() {
        let theta = std::f64::consts::FRAC_PI_6;
        assert!((scalar_max(theta, [0.5, 0.5]) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn helstrom_cases() {
        let orth = pure_pair(std::f64::consts::FRAC_PI_2, [0.5, 0.5]);
        assert!((helstrom_comparator(&orth, &tol()).unwrap() - 1.0).abs() < 1e-15);
        let theta = std::f64::consts::FRAC_PI_6;
        let pair = pure_pair(theta, [0.5, 0.5]);
        assert!((helstrom_comparator(&pair, &tol()).unwrap() - 0.75).abs() < 1e-12);
        let three = random_ensemble(3, &[1, 1, 1], 0, &tol()).unwrap();
        assert!(matches!(
            helstrom_comparator(&three, &tol()),
            Err(MedError::NotTwoState(3))
        ));
    }

    #[test]
    fn oracle_on_pure_pairs() {
        let theta = std::f64::consts::FRAC_PI_6;
        let pair = pure_pair(theta, [0.5, 0.5]);
        let r = solve_oracle(&pair, &OracleBudget::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!((r.success_prob - 0.75).abs() < 1e-8);

        let skewed = pure_pair(theta, [0.9, 0.1]);
        let r = solve_oracle(&skewed, &OracleBudget::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!((r.success_prob - scalar_max(theta, [0.9, 0.1])).abs() < 1e-6);
    }

    #[test]
    fn solve_on_pure_pair() {
        let theta = std::f64::consts::FRAC_PI_6;
        let pair = pure_pair(theta, [0.9, 0.1]);
        let r = solve(&pair, &SolveConfig::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!((r.success_prob - scalar_max(theta, [0.9, 0.1])).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_pair_solved_exactly() {
        let orth = pure_pair(std::f64::consts::FRAC_PI_2, [0.5, 0.5]);
        let r = solve(&orth, &SolveConfig::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!((r.success_prob - 1.0).abs() < 1e-14);
        let r = solve_oracle(&orth, &OracleBudget::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!((r.success_prob - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ascent_is_monotone() {
        let p = random_ensemble(5, &[2, 2, 1], 3, &tol()).unwrap();
        let r = solve(&p, &SolveConfig::default(), &tol()).unwrap();
        assert!(r.certified);
        assert!(r.objective_trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let p = random_ensemble(5, &[2, 2, 1], 3, &tol()).unwrap();
        assert!(matches!(
            solve_oracle(&p, &OracleBudget::default(), &tol()),
            Err(MedError::BudgetExceeded(_))
        ));
    }
}
