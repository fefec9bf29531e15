use num_complex::Complex64;

use super::{frobenius, pd_inverse, CMatrix, HermitianMatrix, Tolerances};
use crate::error::{MedError, Result};

/// A Hermitian matrix written in a basis adapted to a projector `P`:
///
/// ```text
///   basis† M basis = [ A   B ]
///                    [ B†  C ]
/// ```
///
/// where the first `rank` basis vectors span the range of `P`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub a_block: CMatrix,
    pub b_block: CMatrix,
    pub c_block: CMatrix,
    pub basis: CMatrix,
}

impl BlockDecomposition {
    /// Number of range-of-`P` basis vectors.
    pub fn rank(&self) -> usize {
        self.a_block.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Assemble `[[a, b], [b†, c]]` in the adapted basis (no rotation).
    pub fn assemble_local(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
        let r = a.nrows();
        let d = r + c.nrows();
        let mut out = CMatrix::zeros(d, d);
        out.view_mut((0, 0), (r, r)).copy_from(a);
        out.view_mut((0, r), (r, d - r)).copy_from(b);
        out.view_mut((r, 0), (d - r, r)).copy_from(&b.adjoint());
        out.view_mut((r, r), (d - r, d - r)).copy_from(c);
        out
    }

    /// Rotate a matrix given in the adapted basis back to the ambient basis.
    pub fn rotate_back(&self, local: &CMatrix) -> CMatrix {
        &self.basis * local * self.basis.adjoint()
    }

    /// Reconstruct the decomposed matrix in the ambient basis.
    pub fn reassemble(&self) -> HermitianMatrix {
        let local = Self::assemble_local(&self.a_block, &self.b_block, &self.c_block);
        HermitianMatrix::from_matrix_unchecked(self.rotate_back(&local))
    }
}

/// Decompose `m` relative to the orthogonal projector `p`.
///
/// The adapted basis consists of the eigenvectors of `p`, range vectors first.
pub fn block_decompose(
    m: &HermitianMatrix,
    p: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<BlockDecomposition> {
    if m.dim() != p.dim() {
        return Err(MedError::DimensionMismatch(format!(
            "matrix dimension {} vs projector dimension {}",
            m.dim(),
            p.dim()
        )));
    }
    let pm = p.as_matrix();
    let residual = frobenius(&(pm * pm - pm));
    if residual > tol.recon {
        return Err(MedError::NotProjector { residual });
    }
    let eig = p.eigh();
    let rank = eig.values.iter().filter(|&&v| v > 0.5).count();
    let basis = eig.vectors;
    let d = m.dim();
    let local = basis.adjoint() * m.as_matrix() * &basis;
    let a_block = hermitian_part(&local.view((0, 0), (rank, rank)).into_owned());
    let b_block = local.view((0, rank), (rank, d - rank)).into_owned();
    let c_block = hermitian_part(&local.view((rank, rank), (d - rank, d - rank)).into_owned());
    Ok(BlockDecomposition {
        a_block,
        b_block,
        c_block,
        basis,
    })
}

/// Schur complement of the `A` block: `C - B† A⁻¹ B`.
pub fn schur_complement(bd: &BlockDecomposition, tol: &Tolerances) -> Result<HermitianMatrix> {
    if bd.rank() == 0 {
        return Ok(HermitianMatrix::from_matrix_unchecked(bd.c_block.clone()));
    }
    let a = HermitianMatrix::from_matrix_unchecked(bd.a_block.clone());
    let a_inv = pd_inverse(&a, tol)?;
    let correction = bd.b_block.adjoint() * a_inv.as_matrix() * &bd.b_block;
    Ok(HermitianMatrix::from_matrix_unchecked(
        &bd.c_block - correction,
    ))
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}
