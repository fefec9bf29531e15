//! The pretty good measurement `E_i = σ^{-1/2} (q_i σ_i) σ^{-1/2}`.

use crate::ensembles::{average_state, Ensemble, GeneralPOVM, Measurement, ProjectiveMeasurement};
use crate::error::{MedError, Result};
use crate::linalg::{
    condition_number, frobenius, lowdin_orthonormalize, psd_inv_sqrt, rank_eps, CMatrix, Tolerances,
};

/// Average states with a larger condition number are rejected.
pub const MAX_SIGMA_CONDITION: f64 = 1e12;

/// Pretty good measurement as a general POVM.
pub fn pgm_general(q: &Ensemble, tol: &Tolerances) -> Result<GeneralPOVM> {
    let sigma = average_state(q);
    let condition = condition_number(&sigma);
    if condition.is_nan() || condition > MAX_SIGMA_CONDITION {
        return Err(MedError::SigmaSingular { condition });
    }
    let inv_sqrt = psd_inv_sqrt(&sigma, tol).map_err(|_| MedError::SigmaSingular { condition })?;
    let elements = q
        .weighted_states()
        .iter()
        .map(|w| inv_sqrt.sandwich(w))
        .collect();
    Ok(GeneralPOVM::from_elements_unchecked(elements))
}

/// Pretty good measurement of a linearly independent ensemble, promoted to a
/// projective measurement.
///
/// Each element is checked for idempotency and rank, then the range bases of
/// all elements are jointly re-orthonormalized so the returned projectors are
/// orthogonal and complete to machine precision.
pub fn pgm(q: &Ensemble, tol: &Tolerances) -> Result<ProjectiveMeasurement> {
    let general = pgm_general(q, tol)?;
    let d = q.dim();
    let signature = q.rank_signature();
    let mut frame = CMatrix::zeros(d, d);
    let mut col = 0;
    for (index, (e, &r)) in general.elements().iter().zip(signature).enumerate() {
        let m = e.as_matrix();
        let residual = frobenius(&(m * m - m));
        if residual > tol.recon || rank_eps(e, tol) != r {
            return Err(MedError::NotProjectiveAfterPGM { index, residual });
        }
        let eig = e.eigh();
        frame.columns_mut(col, r).copy_from(&eig.columns(0, r));
        col += r;
    }
    let unitary = lowdin_orthonormalize(&frame, tol)?;
    Ok(ProjectiveMeasurement::from_unitary_blocks(
        &unitary, signature,
    ))
}
