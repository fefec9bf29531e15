use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{CMatrix, Tolerances};
use crate::error::{MedError, Result};

/// A dense complex matrix known to be Hermitian.
///
/// Construction checks the entrywise asymmetry against `tol_herm` and then
/// stores the exactly symmetrized part `(M + M†)/2`, so downstream code can
/// rely on exact Hermiticity.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
///
/// Each eigenvector's phase is fixed so that its first largest-modulus
/// component is real and positive, which makes bases reproducible.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuild `V f(Λ) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (k, &v) in self.values.iter().enumerate() {
            let w = f(v);
            for r in 0..d {
                scaled[(r, k)] *= w;
            }
        }
        HermitianMatrix::from_matrix_unchecked(scaled * self.vectors.adjoint())
    }

    /// Columns `start..end` of the eigenvector matrix.
    pub fn columns(&self, start: usize, end: usize) -> CMatrix {
        self.vectors.columns(start, end - start).into_owned()
    }
}

impl HermitianMatrix {
    /// Validate and wrap a complex matrix.
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(MedError::DimensionMismatch(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(MedError::DimensionMismatch(
                "matrix dimension must be at least 1".into(),
            ));
        }
        let asymmetry = super::max_abs_diff(&m, &m.adjoint());
        if asymmetry.is_nan() || asymmetry > tol.herm {
            return Err(MedError::NotHermitian { asymmetry });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Symmetrize without checking; for products that are Hermitian in exact arithmetic.
    pub fn from_matrix_unchecked(m: CMatrix) -> Self {
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self(sym)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self(DMatrix::from_diagonal(&v))
    }

    pub fn identity(d: usize) -> Self {
        Self(CMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(CMatrix::zeros(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::frobenius(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_matrix_unchecked(u * &self.0 * u.adjoint())
    }

    /// `M X M` for a Hermitian `X`.
    pub fn sandwich(&self, inner: &Self) -> Self {
        Self::from_matrix_unchecked(&self.0 * &inner.0 * &self.0)
    }

    /// Sum of a non-empty list of Hermitian matrices.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a HermitianMatrix>) -> Option<Self> {
        let mut iter = items.into_iter();
        let first = iter.next()?.0.clone();
        Some(Self(iter.fold(first, |acc, m| acc + &m.0)))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().min()
    }

    /// Sorted, phase-normalized eigendecomposition.
    ///
    /// Ordering is by descending eigenvalue; eigenvalues closer than `1e-12`
    /// (relative to the spectral scale) count as ties and are ordered by a
    /// lexicographic comparison of their eigenvector components.
    pub fn eigh(&self) -> Eigh {
        let d = self.dim();
        let raw = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| {
            raw.eigenvalues[b]
                .partial_cmp(&raw.eigenvalues[a])
                .unwrap_or(Ordering::Equal)
        });

        let mut vectors = CMatrix::zeros(d, d);
        let mut values = Vec::with_capacity(d);
        for (k, &src) in order.iter().enumerate() {
            values.push(raw.eigenvalues[src]);
            let mut col = raw.eigenvectors.column(src).into_owned();
            normalize_phase(col.as_mut_slice());
            vectors.set_column(k, &col);
        }

        let scale = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let tie = 1e-12 * scale;
        let mut start = 0;
        while start < d {
            let mut end = start + 1;
            while end < d && (values[end - 1] - values[end]).abs() <= tie {
                end += 1;
            }
            if end - start > 1 {
                let mut idx: Vec<usize> = (start..end).collect();
                idx.sort_by(|&a, &b| {
                    lexicographic(vectors.column(a).as_slice(), vectors.column(b).as_slice())
                });
                let block: Vec<_> = idx
                    .iter()
                    .map(|&i| (values[i], vectors.column(i).into_owned()))
                    .collect();
                for (offset, (v, col)) in block.into_iter().enumerate() {
                    values[start + offset] = v;
                    vectors.set_column(start + offset, &col);
                }
            }
            start = end;
        }
        Eigh { values, vectors }
    }
}

fn normalize_phase(col: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in col.iter().enumerate() {
        // strict comparison keeps the first index among near-equal moduli
        if z.norm() > best_norm + 1e-12 {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm <= 0.0 {
        return;
    }
    let phase = col[best].conj() / col[best].norm();
    for z in col.iter_mut() {
        *z *= phase;
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-12 {
                // larger components first
                return q.partial_cmp(&p).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let err = HermitianMatrix::new(m, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, MedError::NotHermitian { .. }));
    }

    #[test]
    fn rejects_non_square_and_empty() {
        let m = CMatrix::zeros(2, 3);
        assert!(HermitianMatrix::new(m, &Tolerances::default()).is_err());
        let m = CMatrix::zeros(0, 0);
        assert!(HermitianMatrix::new(m, &Tolerances::default()).is_err());
    }

    #[test]
    fn eigh_descending_and_reconstructs() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(3.0, 0.0);
        m[(2, 2)] = Complex64::new(2.0, 0.0);
        m[(0, 1)] = Complex64::new(0.2, 0.1);
        m[(1, 0)] = Complex64::new(0.2, -0.1);
        let h = HermitianMatrix::new(m.clone(), &Tolerances::default()).unwrap();
        let e = h.eigh();
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let back = e.map_values(|v| v);
        assert!(super::super::max_abs_diff(back.as_matrix(), &m) < 1e-13);
    }

    #[test]
    fn eigenvector_phase_is_fixed() {
        let h = HermitianMatrix::from_real_diagonal(&[5.0, 7.0]);
        let e = h.eigh();
        assert_eq!(e.values, vec![7.0, 5.0]);
        assert_eq!(e.vectors[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(e.vectors[(0, 1)], Complex64::new(1.0, 0.0));
    }
}
