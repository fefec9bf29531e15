//! Prior-weighted state ensembles and measurements.
//!
//! An [`Ensemble`] is always linearly independent (its states' supports are
//! jointly a basis of the Hilbert space) and carries its rank signature,
//! recomputed from the states at construction time.

use num_complex::Complex64;

use crate::error::{MedError, Result};
use crate::linalg::{frobenius, rank_eps, CMatrix, HermitianMatrix, Tolerances};
use crate::sampling::{complex_gaussian, flat_simplex, haar_unitary, rng_from_seed};

/// A linearly independent ensemble `{p_i, ρ_i}`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<HermitianMatrix>,
    signature: Vec<usize>,
}

impl Ensemble {
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[HermitianMatrix] {
        &self.states
    }

    pub fn rank_signature(&self) -> &[usize] {
        &self.signature
    }

    /// `p_i ρ_i`.
    pub fn weighted(&self, i: usize) -> HermitianMatrix {
        self.states[i].scale(self.priors[i])
    }

    pub fn weighted_states(&self) -> Vec<HermitianMatrix> {
        (0..self.len()).map(|i| self.weighted(i)).collect()
    }

    /// Build an ensemble from unnormalized weighted states `p_i ρ_i`:
    /// `p_i = Tr(w_i) / Σ_j Tr(w_j)` and `ρ_i = w_i / Tr(w_i)`.
    pub fn from_weighted(weighted: &[HermitianMatrix], tol: &Tolerances) -> Result<Self> {
        let total: f64 = weighted.iter().map(HermitianMatrix::trace).sum();
        let mut priors = Vec::with_capacity(weighted.len());
        let mut states = Vec::with_capacity(weighted.len());
        for (i, w) in weighted.iter().enumerate() {
            let t = w.trace();
            if t.is_nan() || t <= 0.0 {
                return Err(MedError::StateNotDensity {
                    index: i,
                    reason: format!("weighted operator has trace {t:e}"),
                });
            }
            priors.push(t / total);
            states.push(w.scale(1.0 / t).into_matrix());
        }
        validate_ensemble(&priors, states, tol)
    }

    /// Conjugate every state by a unitary.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self {
            priors: self.priors.clone(),
            states: self.states.iter().map(|s| s.conjugate_by(u)).collect(),
            signature: self.signature.clone(),
        }
    }

    /// Largest entrywise deviation between `p_i ρ_i` of two ensembles.
    pub fn max_weighted_deviation(&self, other: &Ensemble) -> f64 {
        if self.len() != other.len() || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (0..self.len())
            .map(|i| {
                crate::linalg::max_abs_diff(
                    self.weighted(i).as_matrix(),
                    other.weighted(i).as_matrix(),
                )
            })
            .fold(0.0, f64::max)
    }
}

/// Anything that hands out a list of POVM elements.
pub trait Measurement {
    fn elements(&self) -> &[HermitianMatrix];

    fn dim(&self) -> usize {
        self.elements()[0].dim()
    }

    fn len(&self) -> usize {
        self.elements().len()
    }

    fn is_empty(&self) -> bool {
        self.elements().is_empty()
    }
}

/// A POVM: positive semidefinite elements summing to the identity.
#[derive(Debug, Clone)]
pub struct GeneralPOVM {
    elements: Vec<HermitianMatrix>,
}

impl GeneralPOVM {
    pub fn validate(raw: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let elements = hermitian_list(raw, tol)?;
        for e in &elements {
            let min_eig = e.min_eigenvalue();
            if min_eig < -tol.psd {
                return Err(MedError::NotPSD { min_eig });
            }
        }
        check_completeness(&elements, tol)?;
        Ok(Self { elements })
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<HermitianMatrix>) -> Self {
        Self { elements }
    }
}

impl Measurement for GeneralPOVM {
    fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }
}

/// Mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    projectors: Vec<HermitianMatrix>,
    signature: Vec<usize>,
}

impl ProjectiveMeasurement {
    pub fn rank_signature(&self) -> &[usize] {
        &self.signature
    }

    pub fn projectors(&self) -> &[HermitianMatrix] {
        &self.projectors
    }

    pub fn to_povm(&self) -> GeneralPOVM {
        GeneralPOVM::from_elements_unchecked(self.projectors.clone())
    }

    /// Promote a POVM whose elements are all idempotent.
    pub fn try_from_povm(povm: &GeneralPOVM, tol: &Tolerances) -> Result<Self> {
        for e in povm.elements() {
            let m = e.as_matrix();
            let residual = frobenius(&(m * m - m));
            if residual > tol.recon {
                return Err(MedError::NotProjective { residual });
            }
        }
        validate_projective(
            povm.elements()
                .iter()
                .map(|e| e.as_matrix().clone())
                .collect(),
            tol,
        )
    }

    /// Build from orthonormal column blocks of a unitary; exact by construction.
    pub(crate) fn from_unitary_blocks(u: &CMatrix, signature: &[usize]) -> Self {
        let mut projectors = Vec::with_capacity(signature.len());
        let mut start = 0;
        for &r in signature {
            let cols = u.columns(start, r).into_owned();
            projectors.push(crate::linalg::projector_from_columns(&cols));
            start += r;
        }
        Self {
            projectors,
            signature: signature.to_vec(),
        }
    }

    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(
        projectors: Vec<HermitianMatrix>,
        signature: Vec<usize>,
    ) -> Self {
        Self {
            projectors,
            signature,
        }
    }

    /// Largest entrywise deviation between corresponding projectors.
    pub fn max_deviation(&self, other: &ProjectiveMeasurement) -> f64 {
        if self.projectors.len() != other.projectors.len() {
            return f64::INFINITY;
        }
        self.projectors
            .iter()
            .zip(&other.projectors)
            .map(|(a, b)| crate::linalg::max_abs_diff(a.as_matrix(), b.as_matrix()))
            .fold(0.0, f64::max)
    }
}

impl Measurement for ProjectiveMeasurement {
    fn elements(&self) -> &[HermitianMatrix] {
        &self.projectors
    }
}

/// Validate priors and density matrices as a linearly independent ensemble.
pub fn validate_ensemble(
    priors: &[f64],
    states: Vec<CMatrix>,
    tol: &Tolerances,
) -> Result<Ensemble> {
    let m = states.len();
    if m < 2 {
        return Err(MedError::TooFewStates(m));
    }
    if priors.len() != m {
        return Err(MedError::DimensionMismatch(format!(
            "{} priors for {} states",
            priors.len(),
            m
        )));
    }
    let d = states[0].nrows();
    for (i, s) in states.iter().enumerate() {
        if s.nrows() != d || s.ncols() != d {
            return Err(MedError::DimensionMismatch(format!(
                "state {i} is {}x{}, expected {d}x{d}",
                s.nrows(),
                s.ncols()
            )));
        }
    }
    for (i, &p) in priors.iter().enumerate() {
        if !p.is_finite() || p <= 0.0 {
            return Err(MedError::PriorsInvalid(format!(
                "prior {i} = {p} is not positive"
            )));
        }
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > tol.recon {
        return Err(MedError::PriorsInvalid(format!(
            "priors sum to {total}, expected 1"
        )));
    }

    let mut hermitian = Vec::with_capacity(m);
    for (index, s) in states.into_iter().enumerate() {
        let h = HermitianMatrix::new(s, tol).map_err(|e| MedError::StateNotDensity {
            index,
            reason: e.to_string(),
        })?;
        let min_eig = h.min_eigenvalue();
        if min_eig < -tol.psd {
            return Err(MedError::StateNotDensity {
                index,
                reason: format!("negative eigenvalue {min_eig:e}"),
            });
        }
        let tr = h.trace();
        if (tr - 1.0).abs() > tol.recon {
            return Err(MedError::StateNotDensity {
                index,
                reason: format!("trace {tr}, expected 1"),
            });
        }
        hermitian.push(h);
    }

    let signature: Vec<usize> = hermitian.iter().map(|h| rank_eps(h, tol)).collect();
    let sum: usize = signature.iter().sum();
    if sum != d {
        return Err(MedError::RankSumMismatch {
            ranks: signature,
            sum,
            dim: d,
        });
    }

    let mut stacked = CMatrix::zeros(d, d);
    let mut col = 0;
    for (h, &r) in hermitian.iter().zip(&signature) {
        let eig = h.eigh();
        stacked.columns_mut(col, r).copy_from(&eig.columns(0, r));
        col += r;
    }
    let sv = stacked.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_singular = if max > 0.0 { min / max } else { 0.0 };
    if min_singular <= tol.rank {
        return Err(MedError::NotLinearlyIndependent { min_singular });
    }

    Ok(Ensemble {
        priors: priors.to_vec(),
        states: hermitian,
        signature,
    })
}

/// Validate a list of matrices as a projective measurement.
pub fn validate_projective(raw: Vec<CMatrix>, tol: &Tolerances) -> Result<ProjectiveMeasurement> {
    let projectors = hermitian_list(raw, tol)?;
    for p in &projectors {
        let pm = p.as_matrix();
        let residual = frobenius(&(pm * pm - pm));
        if residual > tol.recon {
            return Err(MedError::NotProjector { residual });
        }
    }
    check_completeness(&projectors, tol)?;
    for i in 0..projectors.len() {
        for j in (i + 1)..projectors.len() {
            let overlap = frobenius(&(projectors[i].as_matrix() * projectors[j].as_matrix()));
            if overlap > tol.recon {
                return Err(MedError::NotOrthogonal {
                    first: i,
                    second: j,
                    overlap,
                });
            }
        }
    }
    let signature = projectors.iter().map(|p| rank_eps(p, tol)).collect();
    Ok(ProjectiveMeasurement {
        projectors,
        signature,
    })
}

fn hermitian_list(raw: Vec<CMatrix>, tol: &Tolerances) -> Result<Vec<HermitianMatrix>> {
    if raw.is_empty() {
        return Err(MedError::DimensionMismatch("empty measurement".into()));
    }
    let d = raw[0].nrows();
    raw.into_iter()
        .enumerate()
        .map(|(i, m)| {
            if m.nrows() != d || m.ncols() != d {
                return Err(MedError::DimensionMismatch(format!(
                    "element {i} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            HermitianMatrix::new(m, tol)
        })
        .collect()
}

fn check_completeness(elements: &[HermitianMatrix], tol: &Tolerances) -> Result<()> {
    let d = elements[0].dim();
    let total = HermitianMatrix::sum(elements).expect("non-empty");
    let residual = frobenius(&(total.as_matrix() - CMatrix::identity(d, d)));
    if residual > tol.recon {
        return Err(MedError::NotComplete { residual });
    }
    Ok(())
}

/// `Σ p_i Tr(ρ_i E_i)`, clamped into `[0, 1]` only when within `tol_recon` of it.
pub fn success_probability(p: &Ensemble, m: &impl Measurement, tol: &Tolerances) -> Result<f64> {
    check_shapes(p, m)?;
    let value: f64 = m
        .elements()
        .iter()
        .zip(p.states())
        .zip(p.priors())
        .map(|((e, rho), &prior)| prior * trace_product(rho, e))
        .sum();
    Ok(if value > 1.0 && value <= 1.0 + tol.recon {
        1.0
    } else if value < 0.0 && value >= -tol.recon {
        0.0
    } else {
        value
    })
}

/// `Σ p_i ρ_i`.
pub fn average_state(p: &Ensemble) -> HermitianMatrix {
    let weighted = p.weighted_states();
    HermitianMatrix::sum(&weighted).expect("ensembles have at least two states")
}

pub(crate) fn check_shapes(p: &Ensemble, m: &impl Measurement) -> Result<()> {
    if m.len() != p.len() {
        return Err(MedError::DimensionMismatch(format!(
            "measurement has {} outcomes, ensemble has {} states",
            m.len(),
            p.len()
        )));
    }
    if m.dim() != p.dim() {
        return Err(MedError::DimensionMismatch(format!(
            "measurement dimension {} vs ensemble dimension {}",
            m.dim(),
            p.dim()
        )));
    }
    Ok(())
}

/// `Re Tr(A B)` for Hermitian `A`, `B`.
pub(crate) fn trace_product(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let (am, bm) = (a.as_matrix(), b.as_matrix());
    let d = am.nrows();
    let mut acc = 0.0;
    for r in 0..d {
        for c in 0..d {
            acc += (am[(r, c)] * bm[(c, r)]).re;
        }
    }
    acc
}

/// Largest condition number accepted for the random frame.
const MAX_FRAME_CONDITION: f64 = 30.0;

/// Seeded random linearly independent ensemble with the given rank signature.
///
/// A Haar-random frame is mixed by a random invertible matrix so the state
/// supports are non-orthogonal; frames with condition number above 30 are
/// redrawn. Each state gets eigenvalues drawn from `[0.2, 1]`, and the priors
/// are a flat simplex draw shrunk towards uniform by 20%.
pub fn random_ensemble(
    d: usize,
    signature: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<Ensemble> {
    check_signature(d, signature)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..1000 {
        let frame = haar_unitary(&mut rng, d) * complex_gaussian(&mut rng, d, d);
        let sv = frame.singular_values();
        let cond = sv.max() / sv.min();
        if cond.is_nan() || cond > MAX_FRAME_CONDITION {
            continue;
        }
        let mut states = Vec::with_capacity(signature.len());
        let mut start = 0;
        for &r in signature {
            let block = frame.columns(start, r).into_owned();
            let basis = block.qr().q();
            let weights: Vec<f64> = (0..r)
                .map(|_| rand::Rng::random_range(&mut rng, 0.2..1.0))
                .collect();
            let total: f64 = weights.iter().sum();
            let mut scaled = basis.clone();
            for (k, w) in weights.iter().enumerate() {
                for row in 0..d {
                    scaled[(row, k)] *= Complex64::new(w / total, 0.0);
                }
            }
            states.push(scaled * basis.adjoint());
            start += r;
        }
        let flat = flat_simplex(&mut rng, signature.len());
        let m = signature.len() as f64;
        let priors: Vec<f64> = flat.iter().map(|x| 0.8 * x + 0.2 / m).collect();
        let priors = renormalize(priors);
        return validate_ensemble(&priors, states, tol);
    }
    Err(MedError::InvalidSignature {
        signature: signature.to_vec(),
        dim: d,
    })
}

pub(crate) fn check_signature(d: usize, signature: &[usize]) -> Result<()> {
    if signature.len() < 2 || signature.contains(&0) || signature.iter().sum::<usize>() != d {
        return Err(MedError::InvalidSignature {
            signature: signature.to_vec(),
            dim: d,
        });
    }
    Ok(())
}

pub(crate) fn renormalize(mut priors: Vec<f64>) -> Vec<f64> {
    let total: f64 = priors.iter().sum();
    for p in &mut priors {
        *p /= total;
    }
    priors
}
