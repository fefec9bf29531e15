//! Full and simplified optimality checks on an optimal and a random measurement.
//!
//! cargo run --example certify

use med_li::belavkin::inverse_map;
use med_li::certify::{certify_full, certify_simplified};
use med_li::ensembles::{random_ensemble, validate_projective};
use med_li::linalg::Tolerances;
use med_li::sampling::{haar_unitary, rng_from_seed};

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let pre = inverse_map(&random_ensemble(3, &[2, 1], 9, &tol)?, &tol)?;
    let p = &pre.ensemble;

    let u = haar_unitary(&mut rng_from_seed(1), 3);
    let first = u.columns(0, 2).into_owned();
    let second = u.columns(2, 1).into_owned();
    let random = validate_projective(
        vec![&first * first.adjoint(), &second * second.adjoint()],
        &tol,
    )?;

    for (name, m) in [("optimal", &pre.measurement), ("random", &random)] {
        let full = certify_full(p, m, &tol)?;
        let simple = certify_simplified(p, m, &tol)?;
        println!(
            "{name:>8}: full {:?} (stationarity {:.2e}, min slack {:.2e}), simplified {:?} (asymmetry {:.2e}, min eig {:.2e})",
            full.verdict,
            full.stationarity_residual,
            full.min_slack_eig,
            simple.verdict,
            simple.hermiticity_residual,
            simple.positivity_min_eig
        );
    }
    Ok(())
}
