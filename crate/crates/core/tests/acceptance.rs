//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_6;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use med_li::belavkin::{forward_map, inverse_map, roundtrip_check};
use med_li::certify::{
    certify_full, certify_simplified, detection_profile, fixpoint_check, Verdict,
};
use med_li::ensembles::{
    random_ensemble, validate_ensemble, validate_projective, Ensemble, ProjectiveMeasurement,
};
use med_li::linalg::{CMatrix, Tolerances};
use med_li::pgm::pgm;
use med_li::sampling::{haar_unitary, rng_from_seed};
use med_li::solver::{
    generate_fixed_point, helstrom_comparator, solve, solve_oracle, OracleBudget, SearchSolver,
    SolveConfig, SolveResult,
};
use num_complex::Complex64;

const CORPUS_SIGNATURES: &[&[usize]] = &[
    &[1, 1],
    &[2, 1],
    &[1, 1, 1],
    &[2, 2],
    &[2, 2, 1],
    &[2, 2, 2],
];

fn tol() -> Tolerances {
    Tolerances::default()
}

fn dim(sig: &[usize]) -> usize {
    sig.iter().sum()
}

/// Outcome of one criterion: pass flag plus a one-line summary.
struct Outcome {
    pass: bool,
    summary: String,
}

impl Outcome {
    fn new(pass: bool, summary: String) -> Self {
        Self { pass, summary }
    }
}

/// Every certified result seen anywhere in the run, for the duality-gap check.
#[derive(Default)]
struct Certified {
    gaps: Vec<f64>,
}

impl Certified {
    fn record(&mut self, r: &SolveResult) {
        if r.certified {
            self.gaps
                .push((r.success_prob - r.certificate.dual_value).abs());
        }
    }
}

fn corpus() -> Vec<Ensemble> {
    (0..200)
        .map(|k| {
            let sig = CORPUS_SIGNATURES[k % CORPUS_SIGNATURES.len()];
            random_ensemble(dim(sig), sig, 1000 + k as u64, &tol()).expect("corpus ensemble")
        })
        .collect()
}

fn random_projective(sig: &[usize], seed: u64) -> ProjectiveMeasurement {
    let d = dim(sig);
    let u = haar_unitary(&mut rng_from_seed(seed), d);
    let mut raw = Vec::new();
    let mut start = 0;
    for &r in sig {
        let cols = u.columns(start, r).into_owned();
        raw.push(&cols * cols.adjoint());
        start += r;
    }
    validate_projective(raw, &tol()).expect("random projective measurement")
}

fn max_measurement_deviation(a: &ProjectiveMeasurement, b: &ProjectiveMeasurement) -> f64 {
    a.projectors()
        .iter()
        .zip(b.projectors())
        .map(|(x, y)| {
            (x.as_matrix() - y.as_matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Success probability of measuring along `(cos φ, sin φ)` and its
/// complement, maximized over φ by a fine scan and golden-section search.
fn pure_pair_scalar_max(theta: f64, priors: [f64; 2]) -> f64 {
    let f =
        |phi: f64| priors[0] * phi.cos().powi(2) + priors[1] * (1.0 - (phi - theta).cos().powi(2));
    let n = 100_000;
    let step = std::f64::consts::PI / n as f64;
    let best = (0..n)
        .map(|k| k as f64 * step)
        .max_by(|a, b| f(*a).partial_cmp(&f(*b)).unwrap())
        .unwrap();
    let (mut lo, mut hi) = (best - step, best + step);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) > f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

fn pure_pair(theta: f64, priors: [f64; 2]) -> Ensemble {
    let c = |x: f64| Complex64::new(x, 0.0);
    let a = CMatrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
    let b = CMatrix::from_column_slice(2, 1, &[c(theta.cos()), c(theta.sin())]);
    validate_ensemble(&priors, vec![&a * a.adjoint(), &b * b.adjoint()], &tol()).unwrap()
}

fn criterion_1(corpus: &[Ensemble], seen: &mut Certified) -> Outcome {
    let start = Instant::now();
    let solver = SearchSolver(SolveConfig::default());
    let (mut worst_fwd, mut worst_inv, mut errors) = (0.0_f64, 0.0_f64, 0);
    for p in corpus {
        match roundtrip_check(p, &solver, &tol()) {
            Ok(r) => {
                worst_inv = worst_inv.max(r.inverse_after_forward);
                worst_fwd = worst_fwd.max(r.forward_after_inverse);
            }
            Err(_) => errors += 1,
        }
        if let Ok(r) = solve(p, &SolveConfig::default(), &tol()) {
            seen.record(&r);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        errors == 0 && worst_inv <= 1e-7 && worst_fwd <= 1e-7,
        format!(
            "bijectivity: {} ensembles, max |R'(R(P)) - P| = {worst_inv:.2e}, max |R(R'(Q)) - Q| = {worst_fwd:.2e}, {errors} failures, {secs:.1}s",
            corpus.len()
        ),
    )
}

fn criterion_2(corpus: &[Ensemble]) -> Outcome {
    let (mut optimal, mut worst_stat, mut worst_slack) = (0, 0.0_f64, f64::INFINITY);
    for q in corpus {
        let Ok(pre) = inverse_map(q, &tol()) else {
            continue;
        };
        let Ok(report) = certify_simplified(&pre.ensemble, &pre.measurement, &tol()) else {
            continue;
        };
        worst_stat = worst_stat.max(report.stationarity_residual);
        worst_slack = worst_slack.min(report.min_slack_eig);
        if report.verdict == Verdict::Optimal
            && report.stationarity_residual <= 1e-8
            && report.min_slack_eig >= -1e-9
        {
            optimal += 1;
        }
    }
    Outcome::new(
        optimal == corpus.len(),
        format!(
            "self-certification: {optimal}/{} optimal, max stationarity {worst_stat:.2e}, min slack {worst_slack:.2e}",
            corpus.len()
        ),
    )
}

fn criterion_3(seen: &mut Certified) -> Outcome {
    let sigs: &[&[usize]] = &[&[1, 1], &[2, 1], &[1, 1, 1], &[1, 2]];
    let (mut worst, mut bad, mut oracle_runs) = (0.0_f64, 0, 0);
    for k in 0..50 {
        let sig = sigs[k % sigs.len()];
        let p = random_ensemble(dim(sig), sig, 3000 + k as u64, &tol()).unwrap();
        let result = if k % 5 == 0 {
            oracle_runs += 1;
            solve_oracle(&p, &OracleBudget::default(), &tol())
        } else {
            solve(&p, &SolveConfig::default(), &tol())
        };
        let Ok(r) = result else {
            bad += 1;
            continue;
        };
        seen.record(&r);
        if !r.certified {
            bad += 1;
            continue;
        }
        let check =
            forward_map(&p, &r.measurement, &r.certificate, &tol()).and_then(|q| pgm(&q, &tol()));
        match check {
            Ok(m) => worst = worst.max(max_measurement_deviation(&m, &r.measurement)),
            Err(_) => bad += 1,
        }
    }
    Outcome::new(
        bad == 0 && worst <= 1e-7,
        format!("optimal = PGM of image: 50 instances ({oracle_runs} via oracle), max deviation {worst:.2e}, {bad} failures"),
    )
}

fn criterion_4() -> Outcome {
    let (mut agree, mut compared, mut inconclusive, mut errors) = (0, 0, 0, 0);
    for k in 0..500 {
        let sig = CORPUS_SIGNATURES[k % CORPUS_SIGNATURES.len()];
        let q = random_ensemble(dim(sig), sig, 5000 + k as u64, &tol()).unwrap();
        let (p, m) = if k % 2 == 0 {
            let Ok(pre) = inverse_map(&q, &tol()) else {
                errors += 1;
                continue;
            };
            (pre.ensemble, pre.measurement)
        } else {
            (q, random_projective(sig, 9000 + k as u64))
        };
        let (Ok(full), Ok(simple)) = (
            certify_full(&p, &m, &tol()),
            certify_simplified(&p, &m, &tol()),
        ) else {
            errors += 1;
            continue;
        };
        if full.verdict == Verdict::Inconclusive || simple.verdict == Verdict::Inconclusive {
            inconclusive += 1;
            continue;
        }
        compared += 1;
        if full.verdict == simple.verdict {
            agree += 1;
        }
    }
    Outcome::new(
        errors == 0 && agree == compared,
        format!("certificate equivalence: {agree}/{compared} agree, {inconclusive} inconclusive, {errors} errors"),
    )
}

fn criterion_5(seen: &mut Certified) -> Outcome {
    let sigs: &[&[usize]] = &[
        &[1, 1],
        &[2, 1],
        &[1, 1, 1],
        &[2, 2],
        &[2, 2, 1],
        &[3, 1],
        &[1, 1, 1, 1],
    ];
    let (mut fixed_ok, mut worst_fixed) = (0, 0.0_f64);
    for k in 0..100 {
        let sig = sigs[k % sigs.len()];
        let p = generate_fixed_point(dim(sig), sig, 7000 + k as u64, &tol()).unwrap();
        let is_fixed = fixpoint_check(&p, &tol())
            .map(|r| r.is_fixed)
            .unwrap_or(false);
        let Ok(r) = solve(&p, &SolveConfig::default(), &tol()) else {
            continue;
        };
        seen.record(&r);
        if let Ok(image) = forward_map(&p, &r.measurement, &r.certificate, &tol()) {
            let dev = image.max_weighted_deviation(&p);
            worst_fixed = worst_fixed.max(dev);
            if is_fixed && dev <= 1e-7 {
                fixed_ok += 1;
            }
        }
    }

    let (mut moved_ok, mut sampled, mut seed, mut least_move) = (0, 0, 20_000u64, f64::INFINITY);
    while sampled < 100 {
        seed += 1;
        let sig = sigs[seed as usize % sigs.len()];
        let p = random_ensemble(dim(sig), sig, seed, &tol()).unwrap();
        let Ok(fp) = fixpoint_check(&p, &tol()) else {
            continue;
        };
        if fp.residual <= 1e-3 {
            continue;
        }
        sampled += 1;
        let Ok(r) = solve(&p, &SolveConfig::default(), &tol()) else {
            continue;
        };
        seen.record(&r);
        if !r.certified {
            continue;
        }
        if let Ok(image) = forward_map(&p, &r.measurement, &r.certificate, &tol()) {
            let dev = image.max_weighted_deviation(&p);
            least_move = least_move.min(dev);
            if !fp.is_fixed && dev > 1e-4 {
                moved_ok += 1;
            }
        }
    }
    Outcome::new(
        fixed_ok == 100 && moved_ok == 100,
        format!(
            "fixed-point iff: {fixed_ok}/100 fixed points stay (max move {worst_fixed:.2e}), {moved_ok}/100 others move (min move {least_move:.2e})"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mixed: &[&[usize]] = &[
        &[2, 1],
        &[2, 2, 1],
        &[3, 1],
        &[2, 1, 1],
        &[3, 2],
        &[1, 2, 3],
    ];
    let mut worst_mixed = 0.0_f64;
    for k in 0..50 {
        let sig = mixed[k % mixed.len()];
        let p = generate_fixed_point(dim(sig), sig, 11_000 + k as u64, &tol()).unwrap();
        let m = pgm(&p, &tol()).unwrap();
        let profile = detection_profile(&p, &m).unwrap();
        let ratios: Vec<f64> = profile
            .iter()
            .zip(sig.iter())
            .map(|(x, &r)| x / r as f64)
            .collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        worst_mixed = ratios
            .iter()
            .fold(worst_mixed, |acc, r| acc.max((r - mean).abs()));
    }
    let mut worst_pure = 0.0_f64;
    for k in 0..50 {
        let m_states = 2 + k % 4;
        let sig = vec![1; m_states];
        let p = generate_fixed_point(m_states, &sig, 12_000 + k as u64, &tol()).unwrap();
        let m = pgm(&p, &tol()).unwrap();
        let profile = detection_profile(&p, &m).unwrap();
        let max = profile.iter().cloned().fold(f64::MIN, f64::max);
        let min = profile.iter().cloned().fold(f64::MAX, f64::min);
        worst_pure = worst_pure.max(max - min);
    }
    Outcome::new(
        worst_mixed <= 1e-6 && worst_pure <= 1e-6,
        format!("detection profile: max |profile_i/r_i - mean| = {worst_mixed:.2e}, pure-state spread {worst_pure:.2e}"),
    )
}

fn criterion_7(seen: &Certified) -> Outcome {
    let worst = seen.gaps.iter().cloned().fold(0.0, f64::max);
    let bad = seen.gaps.iter().filter(|&&g| g > 1e-8).count();
    Outcome::new(
        bad == 0 && !seen.gaps.is_empty(),
        format!(
            "zero duality gap: {} certified results, max gap {worst:.2e}",
            seen.gaps.len()
        ),
    )
}

fn criterion_8(seen: &mut Certified) -> Outcome {
    let sigs: &[&[usize]] = &[&[1, 1], &[2, 1], &[1, 2], &[2, 2], &[3, 1], &[1, 3]];
    let (mut worst, mut errors, mut oracle_runs) = (0.0_f64, 0, 0);
    for k in 0..100 {
        let sig = sigs[k % sigs.len()];
        let p = random_ensemble(dim(sig), sig, 13_000 + k as u64, &tol()).unwrap();
        let (Ok(h), Ok(s)) = (
            helstrom_comparator(&p, &tol()),
            solve(&p, &SolveConfig::default(), &tol()),
        ) else {
            errors += 1;
            continue;
        };
        seen.record(&s);
        worst = worst.max((h - s.success_prob).abs());
        if dim(sig) <= 3 {
            oracle_runs += 1;
            match solve_oracle(&p, &OracleBudget::default(), &tol()) {
                Ok(o) => {
                    seen.record(&o);
                    worst = worst
                        .max((h - o.success_prob).abs())
                        .max((s.success_prob - o.success_prob).abs());
                }
                Err(_) => errors += 1,
            }
        }
    }
    let pair = pure_pair(FRAC_PI_6, [0.5, 0.5]);
    let scalar = pure_pair_scalar_max(FRAC_PI_6, [0.5, 0.5]);
    let values = [
        helstrom_comparator(&pair, &tol()).unwrap_or(f64::NAN),
        solve(&pair, &SolveConfig::default(), &tol()).map_or(f64::NAN, |r| r.success_prob),
        solve_oracle(&pair, &OracleBudget::default(), &tol()).map_or(f64::NAN, |r| r.success_prob),
    ];
    let pi6_ok = (scalar - 0.75).abs() <= 1e-6 && values.iter().all(|v| (v - scalar).abs() <= 1e-6);
    Outcome::new(
        errors == 0 && worst <= 1e-6 && pi6_ok,
        format!(
            "two-state cross-check: 100 ensembles ({oracle_runs} with oracle), max disagreement {worst:.2e}; pi/6 pair scalar {scalar:.10}, comparator/solve/oracle {:.10}/{:.10}/{:.10}",
            values[0], values[1], values[2]
        ),
    )
}

fn criterion_9(seen: &mut Certified) -> Outcome {
    let (mut worst, mut bad) = (0.0_f64, 0);
    for k in 0..50 {
        let sig = CORPUS_SIGNATURES[k % CORPUS_SIGNATURES.len()];
        let p = random_ensemble(dim(sig), sig, 15_000 + k as u64, &tol()).unwrap();
        let a = solve(
            &p,
            &SolveConfig {
                seed: 1,
                ..SolveConfig::default()
            },
            &tol(),
        );
        let cold = SolveConfig {
            seed: 2,
            warm_start: false,
            ..SolveConfig::default()
        };
        let b = solve(&p, &cold, &tol());
        match (a, b) {
            (Ok(a), Ok(b)) if a.certified && b.certified => {
                seen.record(&a);
                seen.record(&b);
                worst = worst.max(max_measurement_deviation(&a.measurement, &b.measurement));
            }
            _ => bad += 1,
        }
    }
    Outcome::new(
        bad == 0 && worst <= 1e-7,
        format!(
            "uniqueness: 50 instances, warm-started seed 1 vs random-only seed 2, max deviation {worst:.2e}, {bad} uncertified"
        ),
    )
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_med-li");
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let cases: &[(&str, &[&str])] = &[
        ("solve_orthogonal_pair", &["solve", "orthogonal_pair.json"]),
        ("solve_pure_pair_pi6", &["solve", "pure_pair_pi6.json"]),
        (
            "solve_fixed_point_d3",
            &["solve", "fixed_point_d3.json", "--seed", "3"],
        ),
        (
            "solve_random_d4",
            &["solve", "random_d4.json", "--seed", "11"],
        ),
    ];
    let mut mismatched = Vec::new();
    for (name, args) in cases {
        let out = Command::new(bin)
            .args(*args)
            .current_dir(root.join("fixtures"))
            .output()
            .expect("binary runs");
        let golden = std::fs::read(root.join("tests/golden").join(format!("{name}.json")))
            .unwrap_or_default();
        if out.stdout != golden || out.status.code() != Some(0) {
            mismatched.push(*name);
        }
    }
    let script = Command::new("bash")
        .arg(root.join("scripts/exit_codes.sh"))
        .arg(bin)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false);
    Outcome::new(
        mismatched.is_empty() && script,
        format!(
            "CLI contract: {}/{} golden reports match, exit-code script {}",
            cases.len() - mismatched.len(),
            cases.len(),
            if script { "passed" } else { "failed" }
        ),
    )
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let mut seen = Certified::default();
    let results = vec![
        criterion_1(&corpus, &mut seen),
        criterion_2(&corpus),
        criterion_3(&mut seen),
        criterion_4(),
        criterion_5(&mut seen),
        criterion_6(),
        criterion_8(&mut seen),
        criterion_9(&mut seen),
        criterion_10(),
    ];
    // the duality gap is checked last, over every certified result above
    let mut results: Vec<(usize, Outcome)> = results
        .into_iter()
        .zip([1, 2, 3, 4, 5, 6, 8, 9, 10])
        .map(|(o, n)| (n, o))
        .collect();
    results.push((7, criterion_7(&seen)));
    results.sort_by_key(|(n, _)| *n);

    let mut failed = 0;
    for (n, o) in &results {
        println!(
            "{} criterion {n:>2}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
