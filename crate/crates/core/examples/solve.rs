//! Certified optimal measurement of a random ensemble, checked against the
//! brute-force oracle.
//!
//! cargo run --release --example solve

use med_li::ensembles::random_ensemble;
use med_li::linalg::Tolerances;
use med_li::solver::{solve, solve_oracle, OracleBudget, SolveConfig};

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let p = random_ensemble(3, &[1, 1, 1], 5, &tol)?;

    let r = solve(&p, &SolveConfig::default(), &tol)?;
    println!(
        "search: value {:.12}, certified {}, start {} after {} steps",
        r.success_prob, r.certified, r.restart, r.iterations
    );
    println!("dual value {:.12}", r.certificate.dual_value);

    let o = solve_oracle(&p, &OracleBudget::default(), &tol)?;
    println!(
        "oracle: value {:.12}, certified {}",
        o.success_prob, o.certified
    );
    println!(
        "measurement difference {:.2e}",
        r.measurement.max_deviation(&o.measurement)
    );
    Ok(())
}
