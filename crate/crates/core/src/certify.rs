//! Optimality certificates for minimum-error discrimination.
//!
//! Two routes are provided. [`certify_full`] checks the general conditions
//! (pairwise stationarity plus `Z ≥ p_i ρ_i` for every state) and works for
//! any POVM. [`certify_simplified`] applies only to rank-matched projective
//! measurements of linearly independent ensembles and checks that
//! `K = Σ p_i ρ_i Π_i` is Hermitian and positive definite.
//!
//! Both report the same set of diagnostics; only the verdict logic differs.

use serde::Serialize;

use crate::ensembles::{average_state, check_shapes, Ensemble, Measurement, ProjectiveMeasurement};
use crate::error::{MedError, Result};
use crate::linalg::{frobenius, psd_sqrt, CMatrix, HermitianMatrix, Tolerances};
use crate::pgm::pgm;

/// Width of the inconclusive band, as a multiple of the tolerance.
pub const INCONCLUSIVE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Optimal,
    NotOptimal,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    /// `max_{i,j} ‖E_j (p_j ρ_j − p_i ρ_i) E_i‖_F`.
    pub stationarity_residual: f64,
    /// Smallest eigenvalue over all `Z − p_i ρ_i`.
    pub min_slack_eig: f64,
    /// Smallest eigenvalue of the Hermitian part of `K`.
    pub positivity_min_eig: f64,
    /// `‖K − K†‖_F`.
    pub hermiticity_residual: f64,
    pub verdict: Verdict,
    /// `Tr Z`.
    pub dual_value: f64,
}

/// `K = Σ p_i ρ_i E_i`.
pub(crate) fn weighted_product_sum(p: &Ensemble, elements: &[HermitianMatrix]) -> CMatrix {
    let d = p.dim();
    let mut k = CMatrix::zeros(d, d);
    for (i, e) in elements.iter().enumerate() {
        k += p.weighted(i).as_matrix() * e.as_matrix();
    }
    k
}

/// Pairwise stationarity residual `max_{i,j} ‖E_j (p_j ρ_j − p_i ρ_i) E_i‖_F`.
pub fn stationarity_residual(p: &Ensemble, elements: &[HermitianMatrix]) -> f64 {
    let weighted = p.weighted_states();
    let mut worst: f64 = 0.0;
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            if i == j {
                continue;
            }
            let diff = weighted[j].as_matrix() - weighted[i].as_matrix();
            let term = elements[j].as_matrix() * diff * elements[i].as_matrix();
            worst = worst.max(frobenius(&term));
        }
    }
    worst
}

/// Smallest eigenvalue of `Z − p_i ρ_i` for each `i`.
pub fn slack_spectrum(p: &Ensemble, z: &HermitianMatrix) -> Vec<f64> {
    (0..p.len())
        .map(|i| z.sub(&p.weighted(i)).min_eigenvalue())
        .collect()
}

fn diagnostics(p: &Ensemble, elements: &[HermitianMatrix]) -> CertificationReport {
    let k = weighted_product_sum(p, elements);
    let hermiticity_residual = frobenius(&(&k - k.adjoint()));
    let z = HermitianMatrix::from_matrix_unchecked(k);
    let min_slack_eig = slack_spectrum(p, &z)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    CertificationReport {
        stationarity_residual: stationarity_residual(p, elements),
        min_slack_eig,
        positivity_min_eig: z.min_eigenvalue(),
        hermiticity_residual,
        verdict: Verdict::Inconclusive,
        dual_value: z.trace(),
    }
}

/// Check the general optimality conditions for an arbitrary POVM.
pub fn certify_full(
    p: &Ensemble,
    m: &impl Measurement,
    tol: &Tolerances,
) -> Result<CertificationReport> {
    check_shapes(p, m)?;
    let mut report = diagnostics(p, m.elements());
    let slack_ok = report.min_slack_eig >= -tol.psd;
    report.verdict = if report.stationarity_residual <= tol.recon && slack_ok {
        Verdict::Optimal
    } else if report.stationarity_residual <= INCONCLUSIVE_FACTOR * tol.recon && slack_ok {
        Verdict::Inconclusive
    } else {
        Verdict::NotOptimal
    };
    Ok(report)
}

/// Check the simplified condition for a rank-matched projective measurement:
/// `Σ p_i ρ_i Π_i` Hermitian and positive definite.
pub fn certify_simplified(
    p: &Ensemble,
    m: &ProjectiveMeasurement,
    tol: &Tolerances,
) -> Result<CertificationReport> {
    check_shapes(p, m)?;
    if m.rank_signature() != p.rank_signature() {
        return Err(MedError::RankSignatureMismatch {
            ensemble: p.rank_signature().to_vec(),
            measurement: m.rank_signature().to_vec(),
        });
    }
    let mut report = diagnostics(p, m.projectors());
    let positive = report.positivity_min_eig > tol.psd;
    report.verdict = if report.hermiticity_residual <= tol.recon && positive {
        Verdict::Optimal
    } else if report.hermiticity_residual <= INCONCLUSIVE_FACTOR * tol.recon && positive {
        Verdict::Inconclusive
    } else {
        Verdict::NotOptimal
    };
    Ok(report)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixpointReport {
    pub is_fixed: bool,
    pub c_estimate: f64,
    pub residual: f64,
}

/// Test whether `Σ Π_i ρ^{1/2} Π_i` is a multiple of the identity, with
/// `Π_i` the pretty good measurement of `p` and `ρ` its average state.
pub fn fixpoint_check(p: &Ensemble, tol: &Tolerances) -> Result<FixpointReport> {
    let m = pgm(p, tol)?;
    let root = psd_sqrt(&average_state(p), tol)?;
    let d = p.dim();
    let mut f = CMatrix::zeros(d, d);
    for proj in m.projectors() {
        f += proj.as_matrix() * root.as_matrix() * proj.as_matrix();
    }
    let f = HermitianMatrix::from_matrix_unchecked(f);
    let c_estimate = f.trace() / d as f64;
    let residual = frobenius(
        &(f.as_matrix() - CMatrix::identity(d, d) * num_complex::Complex64::new(c_estimate, 0.0)),
    );
    Ok(FixpointReport {
        is_fixed: residual <= tol.fixpoint,
        c_estimate,
        residual,
    })
}

/// Per-state detection probabilities `p_i Tr(Π_i ρ_i)`.
pub fn detection_profile(p: &Ensemble, m: &impl Measurement) -> Result<Vec<f64>> {
    check_shapes(p, m)?;
    Ok(m.elements()
        .iter()
        .enumerate()
        .map(|(i, e)| p.priors()[i] * crate::ensembles::trace_product(&p.states()[i], e))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{validate_ensemble, validate_projective};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(v: &[f64]) -> CMatrix {
        HermitianMatrix::from_real_diagonal(v).into_matrix()
    }

    fn orthogonal_pair() -> Ensemble {
        validate_ensemble(
            &[0.5, 0.5],
            vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn orthogonal_pair_support_projectors_are_optimal() {
        let p = orthogonal_pair();
        let m = validate_projective(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], &tol()).unwrap();
        let full = certify_full(&p, &m, &tol()).unwrap();
        assert_eq!(full.verdict, Verdict::Optimal);
        assert!((full.dual_value - 1.0).abs() < 1e-15);
        let simple = certify_simplified(&p, &m, &tol()).unwrap();
        assert_eq!(simple.verdict, Verdict::Optimal);
    }

    #[test]
    fn swapped_projectors_are_not_optimal() {
        let p = orthogonal_pair();
        let m = validate_projective(vec![diag(&[0.0, 1.0]), diag(&[1.0, 0.0])], &tol()).unwrap();
        let full = certify_full(&p, &m, &tol()).unwrap();
        assert_eq!(full.verdict, Verdict::NotOptimal);
        assert!((full.min_slack_eig + 0.5).abs() < 1e-15);
        let simple = certify_simplified(&p, &m, &tol()).unwrap();
        assert_eq!(simple.verdict, Verdict::NotOptimal);
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let s1 = diag(&[1.0, 0.0, 0.0]);
        let s2 = diag(&[0.0, 0.5, 0.5]);
        let p = validate_ensemble(&[0.5, 0.5], vec![s1, s2], &tol()).unwrap();
        let m = validate_projective(vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])], &tol())
            .unwrap();
        assert!(matches!(
            certify_simplified(&p, &m, &tol()),
            Err(MedError::RankSignatureMismatch { .. })
        ));
    }

    #[test]
    fn orthogonal_pair_is_fixed() {
        let r = fixpoint_check(&orthogonal_pair(), &tol()).unwrap();
        assert!(r.is_fixed);
        assert!((r.c_estimate - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(r.residual < 1e-15);
    }

    #[test]
    fn orthogonal_pair_profile() {
        let p = orthogonal_pair();
        let m = validate_projective(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], &tol()).unwrap();
        assert_eq!(detection_profile(&p, &m).unwrap(), vec![0.5, 0.5]);
    }
}
