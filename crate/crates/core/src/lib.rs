//! Minimum-error discrimination for linearly independent state ensembles.
//!
//! The crate covers the pretty good measurement ([`pgm`]), the Belavkin map
//! and its explicit inverse ([`belavkin`]), optimality certificates
//! ([`certify`]) and a certified solver with a brute-force reference
//! ([`solver`]). All matrices are dense complex; the intended dimensions are
//! small (a handful to a few dozen).
//!
//! ```
//! use med_li::{certify::certify_simplified, belavkin::inverse_map, ensembles::random_ensemble};
//! use med_li::{linalg::Tolerances, certify::Verdict};
//!
//! let tol = Tolerances::default();
//! let q = random_ensemble(4, &[2, 1, 1], 7, &tol).unwrap();
//! let pre = inverse_map(&q, &tol).unwrap();
//! let report = certify_simplified(&pre.ensemble, &pre.measurement, &tol).unwrap();
//! assert_eq!(report.verdict, Verdict::Optimal);
//! ```

pub mod belavkin;
pub mod certify;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pgm;
pub mod sampling;
pub mod solver;

pub use error::{MedError, Result};
