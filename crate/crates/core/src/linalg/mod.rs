//! Dense complex Hermitian linear algebra with explicit tolerances.
//!
//! Every spectral quantity in the crate (square roots, inverse square roots,
//! ranks, positivity tests) goes through a single primitive: the Hermitian
//! eigendecomposition [`HermitianMatrix::eigh`]. Dimensions are small, so the
//! dense `nalgebra` routines are adequate.

mod blocks;
mod hermitian;
mod tolerances;

pub use blocks::{block_decompose, schur_complement, BlockDecomposition};
pub use hermitian::{Eigh, HermitianMatrix};
pub use tolerances::Tolerances;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MedError, Result};

/// Dense complex matrix used for intermediate (not necessarily Hermitian) products.
pub type CMatrix = DMatrix<Complex64>;

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-tol_psd, 0)` are clamped to zero before the root is taken.
pub fn psd_sqrt(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let eig = m.eigh();
    let min_eig = eig.min();
    if min_eig < -tol.psd {
        return Err(MedError::NotPSD { min_eig });
    }
    Ok(eig.map_values(|v| v.max(0.0).sqrt()))
}

/// Inverse principal square root of a positive definite matrix.
pub fn psd_inv_sqrt(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let eig = m.eigh();
    let min_eig = eig.min();
    if min_eig <= tol.psd {
        return Err(MedError::NotPD { min_eig });
    }
    Ok(eig.map_values(|v| 1.0 / v.sqrt()))
}

/// Inverse of a positive definite matrix through its eigendecomposition.
pub fn pd_inverse(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let eig = m.eigh();
    let min_eig = eig.min();
    if min_eig <= tol.psd {
        return Err(MedError::NotPD { min_eig });
    }
    Ok(eig.map_values(|v| 1.0 / v))
}

/// Numerical rank: eigenvalues whose magnitude exceeds `tol_rank` times the
/// largest magnitude (or times 1 for the zero matrix).
pub fn rank_eps(m: &HermitianMatrix, tol: &Tolerances) -> usize {
    let eig = m.eigh();
    let largest = eig.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let scale = if largest > 0.0 { largest } else { 1.0 };
    eig.values
        .iter()
        .filter(|v| v.abs() > tol.rank * scale)
        .count()
}

pub fn is_pd(m: &HermitianMatrix, tol: &Tolerances) -> bool {
    m.min_eigenvalue() > tol.psd
}

pub fn is_psd(m: &HermitianMatrix, tol: &Tolerances) -> bool {
    m.min_eigenvalue() > -tol.psd
}

/// Frobenius norm of an arbitrary complex matrix.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Orthonormalize the columns of a full-rank square matrix symmetrically:
/// `W (W† W)^{-1/2}`. Column spans move as little as possible.
pub fn lowdin_orthonormalize(w: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let gram = HermitianMatrix::from_matrix_unchecked(w.adjoint() * w);
    let inv_sqrt = psd_inv_sqrt(&gram, tol)?;
    Ok(w * inv_sqrt.as_matrix())
}

/// Orthogonal projector onto the span of the given orthonormal columns.
pub fn projector_from_columns(cols: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::from_matrix_unchecked(cols * cols.adjoint())
}

/// Exponential of a skew-Hermitian matrix, computed through the Hermitian
/// matrix `-i X`. The result is unitary.
pub fn expm_skew(x: &CMatrix) -> CMatrix {
    let minus_i = Complex64::new(0.0, -1.0);
    let h = HermitianMatrix::from_matrix_unchecked(x * minus_i);
    let eig = h.eigh();
    let d = x.nrows();
    let mut phased = eig.vectors.clone();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let phase = Complex64::new(0.0, lambda).exp();
        for r in 0..d {
            phased[(r, k)] *= phase;
        }
    }
    phased * eig.vectors.adjoint()
}

/// Smallest and largest eigenvalue ratio of a positive definite matrix.
pub fn condition_number(m: &HermitianMatrix) -> f64 {
    let eig = m.eigh();
    let min = eig.min();
    let max = eig.max();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
