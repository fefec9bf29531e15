use thiserror::Error;

use crate::solver::SolveResult;

/// Errors raised by the discrimination toolkit.
#[derive(Debug, Error)]
pub enum MedError {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eig:e})")]
    NotPSD { min_eig: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPD { min_eig: f64 },

    #[error("matrix is not an orthogonal projector (residual {residual:e})")]
    NotProjector { residual: f64 },

    #[error("projectors {first} and {second} are not orthogonal (overlap {overlap:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("measurement elements do not sum to identity (residual {residual:e})")]
    NotComplete { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("an ensemble needs at least two states, got {0}")]
    TooFewStates(usize),

    #[error("invalid priors: {0}")]
    PriorsInvalid(String),

    #[error("state {index} is not a density matrix: {reason}")]
    StateNotDensity { index: usize, reason: String },

    #[error(
        "states are not linearly independent (smallest relative singular value {min_singular:e})"
    )]
    NotLinearlyIndependent { min_singular: f64 },

    #[error("state ranks {ranks:?} sum to {sum}, expected dimension {dim}")]
    RankSumMismatch {
        ranks: Vec<usize>,
        sum: usize,
        dim: usize,
    },

    #[error("invalid rank signature {signature:?} for dimension {dim}")]
    InvalidSignature { signature: Vec<usize>, dim: usize },

    #[error("measurement ranks {measurement:?} do not match ensemble ranks {ensemble:?}")]
    RankSignatureMismatch {
        ensemble: Vec<usize>,
        measurement: Vec<usize>,
    },

    #[error("measurement is not projective (idempotency residual {residual:e})")]
    NotProjective { residual: f64 },

    #[error("average state is singular or ill-conditioned (condition number {condition:e})")]
    SigmaSingular { condition: f64 },

    #[error("pretty good measurement element {index} is not a projector (residual {residual:e})")]
    NotProjectiveAfterPGM { index: usize, residual: f64 },

    #[error("measurement and certificate are not an optimal dual pair: {0}")]
    NotOptimalPair(String),

    #[error("solver failed to produce a certified optimum: {0}")]
    SolverFailed(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("ascent did not converge; best value {:.12}", .0.success_prob)]
    NoConvergence(Box<SolveResult>),

    #[error("could not build a positive definite square root after {attempts} attempts")]
    PDConstructionFailed { attempts: usize },

    #[error("expected a two-state ensemble, got {0} states")]
    NotTwoState(usize),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("cannot parse input: {0}")]
    Parse(String),
}

impl MedError {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            MedError::NotHermitian { .. } => "NotHermitian",
            MedError::NotPSD { .. } => "NotPSD",
            MedError::NotPD { .. } => "NotPD",
            MedError::NotProjector { .. } => "NotProjector",
            MedError::NotOrthogonal { .. } => "NotOrthogonal",
            MedError::NotComplete { .. } => "NotComplete",
            MedError::DimensionMismatch(_) => "DimensionMismatch",
            MedError::TooFewStates(_) => "TooFewStates",
            MedError::PriorsInvalid(_) => "PriorsInvalid",
            MedError::StateNotDensity { .. } => "StateNotDensity",
            MedError::NotLinearlyIndependent { .. } => "NotLinearlyIndependent",
            MedError::RankSumMismatch { .. } => "RankSumMismatch",
            MedError::InvalidSignature { .. } => "InvalidSignature",
            MedError::RankSignatureMismatch { .. } => "RankSignatureMismatch",
            MedError::NotProjective { .. } => "NotProjective",
            MedError::SigmaSingular { .. } => "SigmaSingular",
            MedError::NotProjectiveAfterPGM { .. } => "NotProjectiveAfterPGM",
            MedError::NotOptimalPair(_) => "NotOptimalPair",
            MedError::SolverFailed(_) => "SolverFailed",
            MedError::BudgetExceeded(_) => "BudgetExceeded",
            MedError::NoConvergence(_) => "NoConvergence",
            MedError::PDConstructionFailed { .. } => "PDConstructionFailed",
            MedError::NotTwoState(_) => "NotTwoState",
            MedError::InvalidTolerances(_) => "InvalidTolerances",
            MedError::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = MedError> = std::result::Result<T, E>;
