//! Pretty good measurement of a random ensemble and its success probability.
//!
//! cargo run --example pretty_good_measurement

use med_li::ensembles::{random_ensemble, success_probability};
use med_li::linalg::Tolerances;
use med_li::pgm::pgm;

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let q = random_ensemble(4, &[2, 1, 1], 3, &tol)?;
    let m = pgm(&q, &tol)?;
    println!("rank signature {:?}", m.rank_signature());
    for (i, proj) in m.projectors().iter().enumerate() {
        println!("Π_{i}: trace {:.6}", proj.trace());
    }
    println!(
        "success probability {:.12}",
        success_probability(&q, &m, &tol)?
    );
    Ok(())
}
