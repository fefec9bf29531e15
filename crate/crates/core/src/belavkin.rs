//! The Belavkin map `R` and its explicit inverse `R′`.
//!
//! `R` sends an ensemble `P` with optimal dual pair `({Π_i}, Z)` to the
//! ensemble `Q` with `q_i σ_i = Z Π_i Z / Tr(Z²)`; the pretty good measurement
//! of `Q` is then the optimal measurement of `P`.
//!
//! `R′` goes the other way without any optimization: for each `i`, write
//! `σ^{1/2}` in a basis adapted to `Π_i = PGM(Q)_i`,
//!
//! ```text
//!   σ^{1/2} = [ A_i   B_i ]     X_i = [ A_i   B_i            ]
//!             [ B_i†  C_i ]           [ B_i†  B_i† A_i⁻¹ B_i ]
//! ```
//!
//! i.e. `X_i = σ^{1/2} − (0 ⊕ Δ_i)` with `Δ_i` the Schur complement of `A_i`.
//! Normalizing the `X_i` gives `P`, and `Z = σ^{1/2} / Σ_j Tr X_j` certifies
//! `PGM(Q)` as optimal for `P`.

use serde::Serialize;

use crate::certify::{slack_spectrum, stationarity_residual, weighted_product_sum};
use crate::ensembles::{average_state, check_shapes, Ensemble, ProjectiveMeasurement};
use crate::error::{MedError, Result};
use crate::linalg::{
    block_decompose, frobenius, psd_sqrt, schur_complement, BlockDecomposition, HermitianMatrix,
    Tolerances,
};
use crate::pgm::pgm;
use crate::solver::Solver;

/// The dual operator `Z` with its value and slack spectra.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub z: HermitianMatrix,
    /// `Tr Z`.
    pub dual_value: f64,
    /// Smallest eigenvalue of `Z − p_i ρ_i` per state.
    pub slack_min_eigs: Vec<f64>,
    /// `‖K − K†‖_F` for `K = Σ p_i ρ_i Π_i`; large values mean the
    /// measurement is not stationary.
    pub asymmetry: f64,
}

impl DualCertificate {
    fn new(p: &Ensemble, m: &ProjectiveMeasurement, z: HermitianMatrix) -> Self {
        let k = weighted_product_sum(p, m.projectors());
        Self {
            dual_value: z.trace(),
            slack_min_eigs: slack_spectrum(p, &z),
            asymmetry: frobenius(&(&k - k.adjoint())),
            z,
        }
    }

    /// Every slack `Z − p_i ρ_i` is positive semidefinite within `tol_psd`.
    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.slack_min_eigs.iter().all(|&s| s >= -tol.psd)
    }
}

/// Intermediate operators of the inverse construction.
#[derive(Debug, Clone)]
pub struct MapArtifacts {
    pub x_ops: Vec<HermitianMatrix>,
    pub deltas: Vec<HermitianMatrix>,
    pub sigma_sqrt: HermitianMatrix,
}

/// Output of [`inverse_map`]: the preimage ensemble with its certified
/// optimal measurement.
#[derive(Debug, Clone)]
pub struct InverseImage {
    pub ensemble: Ensemble,
    pub measurement: ProjectiveMeasurement,
    pub certificate: DualCertificate,
    pub artifacts: MapArtifacts,
}

/// `Z = (K + K†)/2` for `K = Σ p_i ρ_i Π_i`, with slack spectra.
///
/// This is the dual operator only when `m` is stationary for `p`; check the
/// certificate before relying on it.
pub fn dual_operator(p: &Ensemble, m: &ProjectiveMeasurement) -> Result<DualCertificate> {
    check_shapes(p, m)?;
    let k = weighted_product_sum(p, m.projectors());
    Ok(DualCertificate::new(
        p,
        m,
        HermitianMatrix::from_matrix_unchecked(k),
    ))
}

/// The forward map `R`: `q_i σ_i = Z Π_i Z / Tr(Z²)`.
///
/// Refuses to run unless `(m, c)` passes the stationarity and slack checks.
pub fn forward_map(
    p: &Ensemble,
    m: &ProjectiveMeasurement,
    c: &DualCertificate,
    tol: &Tolerances,
) -> Result<Ensemble> {
    check_shapes(p, m)?;
    if c.z.dim() != p.dim() || c.slack_min_eigs.len() != p.len() {
        return Err(MedError::DimensionMismatch(
            "certificate does not match the ensemble".into(),
        ));
    }
    let residual = stationarity_residual(p, m.projectors());
    if residual > tol.recon {
        return Err(MedError::NotOptimalPair(format!(
            "stationarity residual {residual:e} exceeds {:e}",
            tol.recon
        )));
    }
    if !c.is_valid(tol) {
        let worst = c
            .slack_min_eigs
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        return Err(MedError::NotOptimalPair(format!(
            "slack eigenvalue {worst:e} below -{:e}",
            tol.psd
        )));
    }
    let z = c.z.as_matrix();
    let z_sq = HermitianMatrix::from_matrix_unchecked(z * z);
    let total = z_sq.trace();
    let mut weighted = Vec::with_capacity(p.len());
    for (i, proj) in m.projectors().iter().enumerate() {
        let overlap = crate::ensembles::trace_product(&z_sq, proj);
        if overlap < tol.psd {
            return Err(MedError::NotOptimalPair(format!(
                "Tr(Z² Π_{i}) = {overlap:e} vanishes"
            )));
        }
        weighted.push(c.z.sandwich(proj).scale(1.0 / total));
    }
    Ensemble::from_weighted(&weighted, tol)
}

/// The inverse map `R′`, returning the preimage ensemble together with its
/// optimal measurement `PGM(q)` and a dual certificate.
pub fn inverse_map(q: &Ensemble, tol: &Tolerances) -> Result<InverseImage> {
    let measurement = pgm(q, tol)?;
    let sigma_sqrt = psd_sqrt(&average_state(q), tol)?;

    let mut x_ops = Vec::with_capacity(q.len());
    let mut deltas = Vec::with_capacity(q.len());
    for proj in measurement.projectors() {
        let bd = block_decompose(&sigma_sqrt, proj, tol)?;
        let delta = schur_complement(&bd, tol)?;
        let lower = &bd.c_block - delta.as_matrix();
        let local = BlockDecomposition::assemble_local(&bd.a_block, &bd.b_block, &lower);
        x_ops.push(HermitianMatrix::from_matrix_unchecked(
            bd.rotate_back(&local),
        ));
        deltas.push(delta);
    }

    let total: f64 = x_ops.iter().map(HermitianMatrix::trace).sum();
    let ensemble = Ensemble::from_weighted(&x_ops, tol)?;
    let z = sigma_sqrt.scale(1.0 / total);
    let certificate = DualCertificate::new(&ensemble, &measurement, z);
    Ok(InverseImage {
        ensemble,
        measurement,
        certificate,
        artifacts: MapArtifacts {
            x_ops,
            deltas,
            sigma_sqrt,
        },
    })
}

/// Deviations of both compositions from the identity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoundtripReport {
    /// Max entrywise deviation of `R′(R(P))` from `P`.
    pub inverse_after_forward: f64,
    /// Max entrywise deviation of `R(R′(P))` from `P`.
    pub forward_after_inverse: f64,
    pub success_prob: f64,
    pub iterations: usize,
}

/// Run `R′∘R` (through the solver) and `R∘R′` on the same ensemble.
pub fn roundtrip_check(
    p: &Ensemble,
    solver: &impl Solver,
    tol: &Tolerances,
) -> Result<RoundtripReport> {
    let solved = solver.solve(p, tol)?;
    if !solved.certified {
        return Err(MedError::SolverFailed(format!(
            "best measurement not certified (verdict {:?})",
            solved.report.verdict
        )));
    }
    let image = forward_map(p, &solved.measurement, &solved.certificate, tol)?;
    let back = inverse_map(&image, tol)?;
    let inverse_after_forward = back.ensemble.max_weighted_deviation(p);

    let pre = inverse_map(p, tol)?;
    let again = forward_map(&pre.ensemble, &pre.measurement, &pre.certificate, tol)?;
    let forward_after_inverse = again.max_weighted_deviation(p);

    Ok(RoundtripReport {
        inverse_after_forward,
        forward_after_inverse,
        success_prob: solved.success_prob,
        iterations: solved.iterations,
    })
}
