use serde::{Deserialize, Serialize};

use crate::error::{MedError, Result};

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Entrywise Hermiticity slack.
    pub herm: f64,
    /// Eigenvalue slack for positivity tests.
    pub psd: f64,
    /// Relative eigenvalue cutoff for numerical rank.
    pub rank: f64,
    /// Frobenius-norm slack for reconstructions and identities.
    pub recon: f64,
    /// Residual threshold for the fixed-point test.
    pub fixpoint: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-9,
            rank: 1e-8,
            recon: 1e-8,
            fixpoint: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("herm", self.herm),
            ("psd", self.psd),
            ("rank", self.rank),
            ("recon", self.recon),
            ("fixpoint", self.fixpoint),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(MedError::InvalidTolerances(format!(
                    "tol_{name} = {value} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_negative_and_nan() {
        let t = Tolerances {
            psd: -1.0,
            ..Default::default()
        };
        assert!(t.validate().is_err());
        let t = Tolerances {
            recon: f64::NAN,
            ..Default::default()
        };
        assert!(t.validate().is_err());
    }
}
