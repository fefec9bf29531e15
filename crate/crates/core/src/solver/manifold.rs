//! Projective measurements of a fixed rank signature as column-block
//! partitions of a unitary `U`, and the success probability as a function on
//! that manifold.
//!
//! Directions are elementary skew-Hermitian generators coupling one column of
//! block `i` with one column of block `j ≠ i`; rotations inside a block do
//! not change the measurement and are left out.

use num_complex::Complex64;

use crate::ensembles::{Ensemble, ProjectiveMeasurement};
use crate::linalg::{lowdin_orthonormalize, CMatrix, Tolerances};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Generator {
    pub a: usize,
    pub b: usize,
    pub imaginary: bool,
}

impl Generator {
    /// `(E[a,b], E[b,a])`.
    fn entries(&self) -> (Complex64, Complex64) {
        if self.imaginary {
            (Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0))
        } else {
            (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
        }
    }

    /// `Re Tr(E M)`.
    pub fn trace_with(&self, m: &CMatrix) -> f64 {
        let (eab, eba) = self.entries();
        (eab * m[(self.b, self.a)] + eba * m[(self.a, self.b)]).re
    }

    pub fn add_scaled_to(&self, x: &mut CMatrix, s: f64) {
        let (eab, eba) = self.entries();
        x[(self.a, self.b)] += eab * s;
        x[(self.b, self.a)] += eba * s;
    }

    /// `U ← U exp(θ E)`; touches only columns `a` and `b`.
    pub fn rotate(&self, u: &mut CMatrix, theta: f64) {
        let (eab, eba) = self.entries();
        let (c, s) = (theta.cos(), theta.sin());
        for row in 0..u.nrows() {
            let ua = u[(row, self.a)];
            let ub = u[(row, self.b)];
            // (U R)[:,a] = U[:,a] R[a,a] + U[:,b] R[b,a], R = I + sinθ E + (cosθ − 1)(e_a e_a† + e_b e_b†)
            u[(row, self.a)] = ua * c + ub * eba * s;
            u[(row, self.b)] = ua * eab * s + ub * c;
        }
    }
}

/// The ensemble's weighted states plus the rank signature, ready for
/// objective evaluations at many unitaries.
pub(crate) struct Landscape {
    weighted: Vec<CMatrix>,
    blocks: Vec<(usize, usize)>,
    generators: Vec<Generator>,
    dim: usize,
}

impl Landscape {
    pub fn new(p: &Ensemble) -> Self {
        let mut blocks = Vec::new();
        let mut start = 0;
        for &r in p.rank_signature() {
            blocks.push((start, start + r));
            start += r;
        }
        let mut generators = Vec::new();
        for (i, &(si, ei)) in blocks.iter().enumerate() {
            for &(sj, ej) in &blocks[i + 1..] {
                for a in si..ei {
                    for b in sj..ej {
                        generators.push(Generator {
                            a,
                            b,
                            imaginary: false,
                        });
                        generators.push(Generator {
                            a,
                            b,
                            imaginary: true,
                        });
                    }
                }
            }
        }
        Self {
            weighted: p
                .weighted_states()
                .into_iter()
                .map(|w| w.into_matrix())
                .collect(),
            blocks,
            generators,
            dim: p.dim(),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn signature(&self) -> Vec<usize> {
        self.blocks.iter().map(|(s, e)| e - s).collect()
    }

    /// `Σ_i Σ_{a ∈ block i} u_a† (p_i ρ_i) u_a`.
    pub fn objective(&self, u: &CMatrix) -> f64 {
        let mut total = 0.0;
        for (w, &(start, end)) in self.weighted.iter().zip(&self.blocks) {
            for a in start..end {
                let col = u.column(a);
                let wc = w * col;
                total += col.dotc(&wc).re;
            }
        }
        total
    }

    /// Weighted states in the frame of `u`: `U† (p_i ρ_i) U`.
    fn local(&self, u: &CMatrix) -> Vec<CMatrix> {
        let ua = u.adjoint();
        self.weighted.iter().map(|w| &ua * w * u).collect()
    }

    /// Gradient and Hessian with respect to the generator coordinates at `u`.
    pub fn derivatives(&self, u: &CMatrix) -> (Vec<f64>, Vec<f64>) {
        let local = self.local(u);
        let n = self.generators.len();
        let d = self.dim;

        // G = Σ_i (P_i A_i − A_i P_i); P_i is diagonal in the local frame
        let mut g_mat = CMatrix::zeros(d, d);
        for (a_loc, &(start, end)) in local.iter().zip(&self.blocks) {
            for r in 0..d {
                for c in 0..d {
                    let in_r = (start..end).contains(&r);
                    let in_c = (start..end).contains(&c);
                    if in_r != in_c {
                        let sign = if in_r { 1.0 } else { -1.0 };
                        g_mat[(r, c)] += a_loc[(r, c)] * sign;
                    }
                }
            }
        }
        let grad: Vec<f64> = self
            .generators
            .iter()
            .map(|g| g.trace_with(&g_mat))
            .collect();

        // H_kl = Re Tr(E_k Σ_i [[E_l, P_i], A_i]); [E_l, P_i] is ±F_l on the two blocks E_l couples
        let mut hess = vec![0.0; n * n];
        for (l, gl) in self.generators.iter().enumerate() {
            let (eab, eba) = gl.entries();
            let mut f = CMatrix::zeros(d, d);
            f[(gl.a, gl.b)] = eab;
            f[(gl.b, gl.a)] = -eba;
            let bi = self.block_of(gl.a);
            let bj = self.block_of(gl.b);
            let diff = &local[bj] - &local[bi];
            let comm = &f * &diff - &diff * &f;
            for (k, gk) in self.generators.iter().enumerate() {
                hess[k * n + l] = gk.trace_with(&comm);
            }
        }
        for k in 0..n {
            for l in (k + 1)..n {
                let avg = 0.5 * (hess[k * n + l] + hess[l * n + k]);
                hess[k * n + l] = avg;
                hess[l * n + k] = avg;
            }
        }
        (grad, hess)
    }

    fn block_of(&self, index: usize) -> usize {
        self.blocks
            .iter()
            .position(|&(s, e)| (s..e).contains(&index))
            .expect("index inside some block")
    }

    /// `U exp(Σ_k x_k E_k)`.
    pub fn step(&self, u: &CMatrix, x: &[f64]) -> CMatrix {
        let mut gen = CMatrix::zeros(self.dim, self.dim);
        for (g, &xk) in self.generators.iter().zip(x) {
            g.add_scaled_to(&mut gen, xk);
        }
        u * crate::linalg::expm_skew(&gen)
    }

    pub fn measurement(&self, u: &CMatrix) -> ProjectiveMeasurement {
        ProjectiveMeasurement::from_unitary_blocks(u, &self.signature())
    }
}

/// Unitary whose column blocks span the ranges of the given projectors.
pub(crate) fn unitary_from_measurement(
    m: &ProjectiveMeasurement,
    tol: &Tolerances,
) -> Option<CMatrix> {
    let d = m.projectors()[0].dim();
    let mut frame = CMatrix::zeros(d, d);
    let mut col = 0;
    for (proj, &r) in m.projectors().iter().zip(m.rank_signature()) {
        let eig = proj.eigh();
        frame.columns_mut(col, r).copy_from(&eig.columns(0, r));
        col += r;
    }
    lowdin_orthonormalize(&frame, tol).ok()
}
