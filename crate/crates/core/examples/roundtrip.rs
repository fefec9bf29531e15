//! The map and its inverse compose to the identity in both orders.
//!
//! cargo run --release --example roundtrip

use med_li::belavkin::roundtrip_check;
use med_li::ensembles::random_ensemble;
use med_li::linalg::Tolerances;
use med_li::solver::SearchSolver;

fn main() -> med_li::Result<()> {
    let tol = Tolerances::default();
    let solver = SearchSolver::default();
    for (d, sig) in [(2, vec![1, 1]), (4, vec![2, 2]), (6, vec![2, 2, 2])] {
        let p = random_ensemble(d, &sig, 1, &tol)?;
        let r = roundtrip_check(&p, &solver, &tol)?;
        println!(
            "d={d} {sig:?}: |R'(R(P)) - P| = {:.2e}, |R(R'(P)) - P| = {:.2e}, value {:.10}",
            r.inverse_after_forward, r.forward_after_inverse, r.success_prob
        );
    }
    Ok(())
}
