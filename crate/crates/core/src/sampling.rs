//! Seeded random matrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussians (unit variance per entry).
pub fn complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// diagonal phases of `R` divided out.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let z = complex_gaussian(rng, d, d);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Uniform sample from the probability simplex (flat Dirichlet).
pub fn flat_simplex(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn haar_is_unitary_and_reproducible() {
        let u = haar_unitary(&mut rng_from_seed(3), 5);
        let err = frobenius(&(u.adjoint() * &u - CMatrix::identity(5, 5)));
        assert!(err < 1e-12);
        let v = haar_unitary(&mut rng_from_seed(3), 5);
        assert_eq!(u, v);
    }

    #[test]
    fn simplex_sums_to_one() {
        let p = flat_simplex(&mut rng_from_seed(1), 4);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&x| x > 0.0));
    }
}
