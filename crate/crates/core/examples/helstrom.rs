//! Two states: spectral comparator against the search solver and a
//! one-angle scan.
//!
//! cargo run --example helstrom

use med_li::ensembles::validate_ensemble;
use med_li::linalg::{CMatrix, Tolerances};
use med_li::solver::{helstrom_comparator, solve, SolveConfig};
use num_complex::Complex64;

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let theta = std::f64::consts::FRAC_PI_6;
    let priors = [0.9, 0.1];
    let c = |x: f64| Complex64::new(x, 0.0);
    let a = CMatrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
    let b = CMatrix::from_column_slice(2, 1, &[c(theta.cos()), c(theta.sin())]);
    let p = validate_ensemble(&priors, vec![&a * a.adjoint(), &b * b.adjoint()], &tol)?;

    let scan = (0..100_000)
        .map(|k| {
            let phi = std::f64::consts::PI * k as f64 / 100_000.0;
            priors[0] * phi.cos().powi(2) + priors[1] * (phi - theta).sin().powi(2)
        })
        .fold(f64::MIN, f64::max);
    println!("comparator {:.12}", helstrom_comparator(&p, &tol)?);
    println!(
        "solver     {:.12}",
        solve(&p, &SolveConfig::default(), &tol)?.success_prob
    );
    println!("angle scan {scan:.12}");
    Ok(())
}
