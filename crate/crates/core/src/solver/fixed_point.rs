//! Ensembles whose pretty good measurement is already optimal.
//!
//! Take coordinate projectors `Π_i` of ranks `r_i` and a positive definite
//! `S` whose diagonal blocks are all `c·Id`. Then `p_i ρ_i = S Π_i S` has
//! average state `S²`, so `ρ^{1/2} = S` and `Σ_i Π_i S Π_i = c·Id`.

use num_complex::Complex64;

use crate::ensembles::{check_signature, Ensemble};
use crate::error::{MedError, Result};
use crate::linalg::{CMatrix, HermitianMatrix, Tolerances};
use crate::sampling::{complex_gaussian, haar_unitary, rng_from_seed};

/// Off-diagonal scale is halved this many times before giving up.
const MAX_ATTEMPTS: usize = 8;

/// Build the fixed point `p_i ρ_i = S Π_i S` from a root `S` (rescaled so
/// that `Tr S² = 1`), with `Π_i` the coordinate projectors of `signature`.
///
/// `S` must be positive definite. The result is a fixed point only when the
/// diagonal blocks of `S` share one multiple of the identity.
pub fn fixed_point_from_root(
    s: &HermitianMatrix,
    signature: &[usize],
    tol: &Tolerances,
) -> Result<Ensemble> {
    check_signature(s.dim(), signature)?;
    let min_eig = s.min_eigenvalue();
    if min_eig <= tol.psd {
        return Err(MedError::NotPD { min_eig });
    }
    let norm = s.frobenius_norm();
    let s = s.scale(1.0 / norm);
    let mut weighted = Vec::with_capacity(signature.len());
    let mut start = 0;
    for &r in signature {
        let diag: Vec<f64> = (0..s.dim())
            .map(|k| {
                if (start..start + r).contains(&k) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        weighted.push(s.sandwich(&HermitianMatrix::from_real_diagonal(&diag)));
        start += r;
    }
    Ensemble::from_weighted(&weighted, tol)
}

/// Seeded random fixed point with the given rank signature, rotated by a
/// Haar-random unitary.
pub fn generate_fixed_point(
    d: usize,
    signature: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<Ensemble> {
    check_signature(d, signature)?;
    let mut rng = rng_from_seed(seed);
    let mut block = vec![0; d];
    let mut start = 0;
    for (i, &r) in signature.iter().enumerate() {
        block[start..start + r].fill(i);
        start += r;
    }
    let g = complex_gaussian(&mut rng, d, d);
    let off = CMatrix::from_fn(d, d, |r, c| {
        if block[r] == block[c] {
            Complex64::new(0.0, 0.0)
        } else {
            (g[(r, c)] + g[(c, r)].conj()) * 0.5
        }
    });
    let off = HermitianMatrix::from_matrix_unchecked(off);
    let spectral = off
        .eigh()
        .values
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let mut target: f64 = rand::Rng::random_range(&mut rng, 0.1..0.7);
    let u = haar_unitary(&mut rng, d);

    for _ in 0..MAX_ATTEMPTS {
        let scale = if spectral > 0.0 {
            target / spectral
        } else {
            0.0
        };
        let s = HermitianMatrix::identity(d).add(&off.scale(scale));
        match fixed_point_from_root(&s, signature, tol) {
            Ok(p) => return Ok(p.conjugate_by(&u)),
            Err(MedError::NotPD { .. } | MedError::NotLinearlyIndependent { .. }) => target *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(MedError::PDConstructionFailed {
        attempts: MAX_ATTEMPTS,
    })
}
