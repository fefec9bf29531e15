//! Build an ensemble with a known optimal measurement from any ensemble.
//!
//! cargo run --example inverse_map

use med_li::belavkin::inverse_map;
use med_li::certify::certify_simplified;
use med_li::ensembles::{random_ensemble, success_probability};
use med_li::linalg::Tolerances;

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let q = random_ensemble(5, &[2, 2, 1], 42, &tol)?;
    let pre = inverse_map(&q, &tol)?;

    println!("preimage priors {:?}", pre.ensemble.priors());
    for (i, delta) in pre.artifacts.deltas.iter().enumerate() {
        println!(
            "Schur complement {i}: smallest eigenvalue {:.3e}",
            delta.min_eigenvalue()
        );
    }
    let report = certify_simplified(&pre.ensemble, &pre.measurement, &tol)?;
    let value = success_probability(&pre.ensemble, &pre.measurement, &tol)?;
    println!("verdict {:?}", report.verdict);
    println!(
        "success probability {value:.12}, dual value {:.12}",
        pre.certificate.dual_value
    );
    Ok(())
}
