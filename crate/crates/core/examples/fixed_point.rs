//! Ensembles whose pretty good measurement is already optimal.
//!
//! cargo run --example fixed_point

use med_li::certify::{detection_profile, fixpoint_check};
use med_li::ensembles::random_ensemble;
use med_li::linalg::Tolerances;
use med_li::pgm::pgm;
use med_li::solver::generate_fixed_point;

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let sig = [2, 1, 1];
    let p = generate_fixed_point(4, &sig, 5, &tol)?;
    let fp = fixpoint_check(&p, &tol)?;
    println!(
        "generated: fixed {} (c = {:.6}, residual {:.2e})",
        fp.is_fixed, fp.c_estimate, fp.residual
    );
    let profile = detection_profile(&p, &pgm(&p, &tol)?)?;
    let per_rank: Vec<f64> = profile.iter().zip(sig).map(|(x, r)| x / r as f64).collect();
    println!("detection probability per rank {per_rank:.6?}");

    let q = random_ensemble(4, &sig, 5, &tol)?;
    let fq = fixpoint_check(&q, &tol)?;
    println!(
        "random:    fixed {} (residual {:.2e})",
        fq.is_fixed, fq.residual
    );
    Ok(())
}
