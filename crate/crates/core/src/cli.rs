//! The `med-li` command line.
//!
//! Every subcommand writes one JSON report (or, for `gen`, an ensemble file)
//! to stdout or `--out`. Exit codes: 0 certified / true, 2 bad input,
//! 3 uncertified / false, 4 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::belavkin::{forward_map, inverse_map, roundtrip_check, DualCertificate};
use crate::certify::{
    certify_full, certify_simplified, detection_profile, fixpoint_check, CertificationReport,
    FixpointReport, Verdict,
};
use crate::ensembles::{
    check_signature, random_ensemble, Ensemble, Measurement, ProjectiveMeasurement,
};
use crate::error::MedError;
use crate::io::{
    digest, matrix_json, reals, to_json_string, EnsembleFile, MatrixJson, MeasurementFile, Real,
    SCHEMA_VERSION,
};
use crate::linalg::Tolerances;
use crate::pgm::pgm;
use crate::solver::{
    generate_fixed_point, solve, solve_oracle, OracleBudget, SolveConfig, SolveResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Largest composition deviation for which `roundtrip` exits 0.
pub const ROUNDTRIP_TOL: f64 = 1e-7;

#[derive(Parser, Debug)]
#[command(
    name = "med-li",
    version,
    about = "Minimum-error discrimination of linearly independent ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Do not print diagnostics on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TolArgs {
    #[arg(long = "tol-psd", global = true)]
    pub psd: Option<f64>,
    #[arg(long = "tol-rank", global = true)]
    pub rank: Option<f64>,
    #[arg(long = "tol-recon", global = true)]
    pub recon: Option<f64>,
    #[arg(long = "tol-fixpoint", global = true)]
    pub fixpoint: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> Result<Tolerances, MedError> {
        let mut tol = Tolerances::default();
        if let Some(v) = self.psd {
            tol.psd = v;
        }
        if let Some(v) = self.rank {
            tol.rank = v;
        }
        if let Some(v) = self.recon {
            tol.recon = v;
        }
        if let Some(v) = self.fixpoint {
            tol.fixpoint = v;
        }
        tol.validate()?;
        Ok(tol)
    }

    fn echo(&self, out: &mut Vec<String>) {
        for (flag, value) in [
            ("--tol-psd", self.psd),
            ("--tol-rank", self.rank),
            ("--tol-recon", self.recon),
            ("--tol-fixpoint", self.fixpoint),
        ] {
            if let Some(v) = value {
                out.push(flag.into());
                out.push(format!("{v:e}"));
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of ascent starts, the pretty good measurement included.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Iteration cap per ascent start.
    #[arg(long = "max-iters", default_value_t = 500)]
    pub max_iters: usize,
    /// Use the brute-force oracle (d ≤ 4, at most 3 states).
    #[arg(long)]
    pub oracle: bool,
}

impl SearchArgs {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.max_iters,
            ..SolveConfig::default()
        }
    }

    fn run(&self, p: &Ensemble, tol: &Tolerances) -> Result<SolveResult, MedError> {
        if self.oracle {
            solve_oracle(p, &OracleBudget::default(), tol)
        } else {
            solve(p, &self.config(), tol)
        }
    }

    fn echo(&self, out: &mut Vec<String>) {
        out.extend([
            "--seed".into(),
            self.seed.to_string(),
            "--restarts".into(),
            self.restarts.to_string(),
            "--max-iters".into(),
            self.max_iters.to_string(),
        ]);
        if self.oracle {
            out.push("--oracle".into());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find and certify the optimal measurement of an ensemble.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check whether a measurement is optimal for an ensemble.
    Certify { input: PathBuf, povm: PathBuf },
    /// Apply the Belavkin map (forward) or its inverse.
    Map {
        input: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Report how far both compositions of the map and its inverse are from the identity.
    Roundtrip {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Generate a random ensemble or fixed point.
    Gen {
        #[arg(long)]
        dim: usize,
        /// Comma-separated state ranks, e.g. `2,1`.
        #[arg(long)]
        signature: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "fixed-point")]
        fixed_point: bool,
    },
    /// Test whether the pretty good measurement is optimal via the fixed-point condition.
    Fixpoint { input: PathBuf },
}

/// What a command produced: the output text, the exit code and an optional
/// diagnostic for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub output: Option<String>,
    pub code: i32,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn input_error(e: MedError) -> Self {
        Self {
            output: None,
            code: EXIT_INPUT,
            diagnostic: Some(format!("error[{}]: {e}", e.kind())),
        }
    }
}

/// Exit code for an error raised after the input was accepted.
pub fn exit_code(e: &MedError) -> i32 {
    match e {
        MedError::NoConvergence(_) | MedError::SolverFailed(_) | MedError::NotOptimalPair(_) => {
            EXIT_UNCERTIFIED
        }
        MedError::BudgetExceeded(_)
        | MedError::InvalidTolerances(_)
        | MedError::InvalidSignature { .. }
        | MedError::Parse(_) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Serialize)]
pub struct Residuals {
    pub stationarity: Real,
    pub min_slack_eig: Real,
    pub positivity_min_eig: Real,
    pub hermiticity: Real,
}

impl From<&CertificationReport> for Residuals {
    fn from(r: &CertificationReport) -> Self {
        Self {
            stationarity: Real(r.stationarity_residual),
            min_slack_eig: Real(r.min_slack_eig),
            positivity_min_eig: Real(r.positivity_min_eig),
            hermiticity: Real(r.hermiticity_residual),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FixedPointBlock {
    pub is_fixed: bool,
    pub c_estimate: Real,
    pub residual: Real,
}

impl From<FixpointReport> for FixedPointBlock {
    fn from(r: FixpointReport) -> Self {
        Self {
            is_fixed: r.is_fixed,
            c_estimate: Real(r.c_estimate),
            residual: Real(r.residual),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateBlock {
    pub z: MatrixJson,
    pub dual_value: Real,
    pub slack_min_eigs: Vec<Real>,
}

impl From<&DualCertificate> for CertificateBlock {
    fn from(c: &DualCertificate) -> Self {
        Self {
            z: matrix_json(c.z.as_matrix()),
            dual_value: Real(c.dual_value),
            slack_min_eigs: reals(&c.slack_min_eigs),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictBlock {
    pub verdict: Verdict,
    pub dual_value: Real,
    pub residuals: Residuals,
}

impl From<&CertificationReport> for VerdictBlock {
    fn from(r: &CertificationReport) -> Self {
        Self {
            verdict: r.verdict,
            dual_value: Real(r.dual_value),
            residuals: r.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertifyBlock {
    pub full: VerdictBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified: Option<VerdictBlock>,
    /// Why the simplified check does not apply, when it does not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified_skipped: Option<ErrorBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct MapBlock {
    pub direction: Direction,
    pub image: EnsembleFile,
    pub certificate: CertificateBlock,
    /// Largest entrywise change `max |q_i σ_i − p_i ρ_i|`.
    pub displacement: Real,
}

#[derive(Debug, Serialize)]
pub struct RoundtripBlock {
    pub inverse_after_forward: Real,
    pub forward_after_inverse: Real,
    pub within_tolerance: bool,
}

#[derive(Debug, Serialize)]
pub struct ErrorBlock {
    pub kind: &'static str,
    pub message: String,
}

impl From<&MedError> for ErrorBlock {
    fn from(e: &MedError) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

/// Deterministic work counters (no wall-clock values, so reports stay byte-stable).
#[derive(Debug, Serialize)]
pub struct Timings {
    pub iterations: usize,
    pub restarts: usize,
    pub restart_index: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_prob: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_value: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<Vec<MatrixJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_profile: Option<Vec<Real>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<FixedPointBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertifyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip: Option<RoundtripBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBlock>,
}

impl Report {
    fn new(command: Vec<String>, input_digest: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            input_digest,
            certified: None,
            success_prob: None,
            dual_value: None,
            verdict: None,
            residuals: None,
            measurement: None,
            detection_profile: None,
            fixed_point: None,
            certification: None,
            map: None,
            roundtrip: None,
            timings: None,
            error: None,
        }
    }

    fn with_solution(mut self, r: &SolveResult, restarts: usize) -> Self {
        self.certified = Some(r.certified);
        self.success_prob = Some(Real(r.success_prob));
        self.dual_value = Some(Real(r.certificate.dual_value));
        self.verdict = Some(r.report.verdict);
        self.residuals = Some((&r.report).into());
        self.measurement = Some(measurement_json(&r.measurement));
        self.timings = Some(Timings {
            iterations: r.iterations,
            restarts,
            restart_index: r.restart,
        });
        self
    }

    fn finish(self, code: i32, diagnostic: Option<String>) -> Outcome {
        Outcome {
            output: Some(to_json_string(&self)),
            code,
            diagnostic,
        }
    }

    fn failed(mut self, e: &MedError) -> Outcome {
        self.error = Some(e.into());
        self.finish(exit_code(e), Some(format!("error[{}]: {e}", e.kind())))
    }
}

fn measurement_json(m: &impl Measurement) -> Vec<MatrixJson> {
    m.elements()
        .iter()
        .map(|e| matrix_json(e.as_matrix()))
        .collect()
}

fn basename(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Read and validate an ensemble file, returning it with the digest of its bytes.
fn load_ensemble(path: &Path, tol: &Tolerances) -> Result<(Ensemble, String), MedError> {
    let bytes =
        std::fs::read(path).map_err(|e| MedError::Parse(format!("{}: {e}", path.display())))?;
    let file = EnsembleFile::parse(&bytes)?;
    Ok((file.to_ensemble(tol)?, digest(&bytes)))
}

fn parse_signature(text: &str) -> Result<Vec<usize>, MedError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| {
                MedError::Parse(format!(
                    "--signature: `{text}` is not a comma-separated list of ranks"
                ))
            })
        })
        .collect()
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let tol = match cli.tol.resolve() {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(e),
    };
    match &cli.command {
        Command::Solve { input, search } => cmd_solve(input, search, &cli.tol, &tol),
        Command::Certify { input, povm } => cmd_certify(input, povm, &cli.tol, &tol),
        Command::Map {
            input,
            direction,
            search,
        } => cmd_map(input, *direction, search, &cli.tol, &tol),
        Command::Roundtrip { input, search } => cmd_roundtrip(input, search, &cli.tol, &tol),
        Command::Gen {
            dim,
            signature,
            seed,
            fixed_point,
        } => cmd_gen(*dim, signature, *seed, *fixed_point, &tol),
        Command::Fixpoint { input } => cmd_fixpoint(input, &cli.tol, &tol),
    }
}

fn cmd_solve(input: &Path, search: &SearchArgs, tol_args: &TolArgs, tol: &Tolerances) -> Outcome {
    let mut echo = vec!["solve".into(), basename(input)];
    search.echo(&mut echo);
    tol_args.echo(&mut echo);
    let (p, dig) = match load_ensemble(input, tol) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let report = Report::new(echo, Some(dig));
    let restarts = if search.oracle { 0 } else { search.restarts };
    match search.run(&p, tol) {
        Ok(r) => {
            let mut report = report.with_solution(&r, restarts);
            report.fixed_point = fixpoint_check(&p, tol).ok().map(Into::into);
            if r.certified {
                report.finish(EXIT_OK, None)
            } else {
                report.finish(
                    EXIT_UNCERTIFIED,
                    Some("best measurement found is not certified".into()),
                )
            }
        }
        Err(MedError::NoConvergence(best)) => {
            let e = MedError::NoConvergence(best.clone());
            report.with_solution(&best, restarts).failed(&e)
        }
        Err(e) => report.failed(&e),
    }
}

fn cmd_certify(input: &Path, povm: &Path, tol_args: &TolArgs, tol: &Tolerances) -> Outcome {
    let mut echo = vec!["certify".into(), basename(input), basename(povm)];
    tol_args.echo(&mut echo);
    let loaded = load_ensemble(input, tol).and_then(|(p, dig)| {
        let bytes =
            std::fs::read(povm).map_err(|e| MedError::Parse(format!("{}: {e}", povm.display())))?;
        let m = MeasurementFile::parse(&bytes)?.to_povm(tol)?;
        Ok((p, m, format!("{dig} {}", digest(&bytes))))
    });
    let (p, m, dig) = match loaded {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let mut report = Report::new(echo, Some(dig));
    let full = match certify_full(&p, &m, tol) {
        Ok(r) => r,
        Err(MedError::DimensionMismatch(msg)) => {
            return Outcome::input_error(MedError::DimensionMismatch(msg))
        }
        Err(e) => return report.failed(&e),
    };
    let simplified = ProjectiveMeasurement::try_from_povm(&m, tol)
        .and_then(|pm| certify_simplified(&p, &pm, tol));
    let (simple_block, skipped, agree) = match &simplified {
        Ok(s) => {
            let agree = full.verdict == Verdict::Inconclusive
                || s.verdict == Verdict::Inconclusive
                || full.verdict == s.verdict;
            (Some((s).into()), None, Some(agree))
        }
        Err(e) => (None, Some(e.into()), None),
    };
    report.verdict = Some(full.verdict);
    report.dual_value = Some(Real(full.dual_value));
    report.success_prob = crate::ensembles::success_probability(&p, &m, tol)
        .ok()
        .map(Real);
    report.residuals = Some((&full).into());
    report.measurement = Some(measurement_json(&m));
    report.certification = Some(CertifyBlock {
        full: (&full).into(),
        simplified: simple_block,
        simplified_skipped: skipped,
        agree,
    });
    let optimal = full.verdict == Verdict::Optimal;
    report.certified = Some(optimal);
    if optimal {
        report.finish(EXIT_OK, None)
    } else {
        report.finish(
            EXIT_UNCERTIFIED,
            Some(format!("verdict {:?}", full.verdict)),
        )
    }
}

fn cmd_map(
    input: &Path,
    direction: Direction,
    search: &SearchArgs,
    tol_args: &TolArgs,
    tol: &Tolerances,
) -> Outcome {
    let mut echo = vec!["map".into(), basename(input), "--direction".into()];
    echo.push(match direction {
        Direction::Forward => "forward".into(),
        Direction::Inverse => "inverse".into(),
    });
    if direction == Direction::Forward {
        search.echo(&mut echo);
    }
    tol_args.echo(&mut echo);
    let (p, dig) = match load_ensemble(input, tol) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let report = Report::new(echo, Some(dig));
    match direction {
        Direction::Forward => {
            let solved = match search.run(&p, tol) {
                Ok(r) => r,
                Err(MedError::NoConvergence(best)) => {
                    let e = MedError::NoConvergence(best.clone());
                    return report.with_solution(&best, search.restarts).failed(&e);
                }
                Err(e) => return report.failed(&e),
            };
            let restarts = if search.oracle { 0 } else { search.restarts };
            let mut report = report.with_solution(&solved, restarts);
            if !solved.certified {
                let e = MedError::SolverFailed(
                    "optimal measurement not certified; forward map needs a certified pair".into(),
                );
                return report.failed(&e);
            }
            match forward_map(&p, &solved.measurement, &solved.certificate, tol) {
                Ok(image) => {
                    report.map = Some(MapBlock {
                        direction,
                        displacement: Real(image.max_weighted_deviation(&p)),
                        image: EnsembleFile::from_ensemble(&image, None),
                        certificate: (&solved.certificate).into(),
                    });
                    report.finish(EXIT_OK, None)
                }
                Err(e) => {
                    report.certified = Some(false);
                    report.failed(&e)
                }
            }
        }
        Direction::Inverse => match inverse_map(&p, tol) {
            Ok(pre) => {
                let mut report = report;
                let cert = certify_simplified(&pre.ensemble, &pre.measurement, tol);
                let optimal = matches!(&cert, Ok(c) if c.verdict == Verdict::Optimal);
                if let Ok(c) = &cert {
                    report.verdict = Some(c.verdict);
                    report.residuals = Some(c.into());
                    report.success_prob =
                        crate::ensembles::success_probability(&pre.ensemble, &pre.measurement, tol)
                            .ok()
                            .map(Real);
                }
                report.certified = Some(optimal);
                report.dual_value = Some(Real(pre.certificate.dual_value));
                report.measurement = Some(measurement_json(&pre.measurement));
                report.map = Some(MapBlock {
                    direction,
                    displacement: Real(pre.ensemble.max_weighted_deviation(&p)),
                    image: EnsembleFile::from_ensemble(&pre.ensemble, None),
                    certificate: (&pre.certificate).into(),
                });
                match cert {
                    Err(e) => report.failed(&e),
                    Ok(_) if optimal => report.finish(EXIT_OK, None),
                    Ok(c) => report.finish(
                        EXIT_UNCERTIFIED,
                        Some(format!("preimage verdict {:?}", c.verdict)),
                    ),
                }
            }
            Err(e) => report.failed(&e),
        },
    }
}

fn cmd_roundtrip(
    input: &Path,
    search: &SearchArgs,
    tol_args: &TolArgs,
    tol: &Tolerances,
) -> Outcome {
    let mut echo = vec!["roundtrip".into(), basename(input)];
    search.echo(&mut echo);
    tol_args.echo(&mut echo);
    let (p, dig) = match load_ensemble(input, tol) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let mut report = Report::new(echo, Some(dig));
    let outcome = if search.oracle {
        roundtrip_check(
            &p,
            &crate::solver::OracleSolver(OracleBudget::default()),
            tol,
        )
    } else {
        roundtrip_check(&p, &crate::solver::SearchSolver(search.config()), tol)
    };
    match outcome {
        Ok(r) => {
            let within = r.inverse_after_forward <= ROUNDTRIP_TOL
                && r.forward_after_inverse <= ROUNDTRIP_TOL;
            report.success_prob = Some(Real(r.success_prob));
            report.roundtrip = Some(RoundtripBlock {
                inverse_after_forward: Real(r.inverse_after_forward),
                forward_after_inverse: Real(r.forward_after_inverse),
                within_tolerance: within,
            });
            report.timings = Some(Timings {
                iterations: r.iterations,
                restarts: if search.oracle { 0 } else { search.restarts },
                restart_index: 0,
            });
            if within {
                report.finish(EXIT_OK, None)
            } else {
                report.finish(
                    EXIT_UNCERTIFIED,
                    Some(format!("deviation exceeds {ROUNDTRIP_TOL:e}")),
                )
            }
        }
        Err(e) => report.failed(&e),
    }
}

fn cmd_gen(dim: usize, signature: &str, seed: u64, fixed_point: bool, tol: &Tolerances) -> Outcome {
    let sig = match parse_signature(signature).and_then(|s| check_signature(dim, &s).map(|_| s)) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let generated = if fixed_point {
        generate_fixed_point(dim, &sig, seed, tol)
    } else {
        random_ensemble(dim, &sig, seed, tol)
    };
    match generated {
        Ok(p) => {
            let kind = if fixed_point { "fixed-point" } else { "random" };
            let label = format!("{kind} dim={dim} signature={signature} seed={seed}");
            Outcome {
                output: Some(EnsembleFile::from_ensemble(&p, Some(label)).to_json()),
                code: EXIT_OK,
                diagnostic: None,
            }
        }
        Err(e) => Outcome {
            output: None,
            code: exit_code(&e),
            diagnostic: Some(format!("error[{}]: {e}", e.kind())),
        },
    }
}

fn cmd_fixpoint(input: &Path, tol_args: &TolArgs, tol: &Tolerances) -> Outcome {
    let mut echo = vec!["fixpoint".into(), basename(input)];
    tol_args.echo(&mut echo);
    let (p, dig) = match load_ensemble(input, tol) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let mut report = Report::new(echo, Some(dig));
    let checked = fixpoint_check(&p, tol).and_then(|fp| {
        let m = pgm(&p, tol)?;
        let profile = detection_profile(&p, &m)?;
        Ok((fp, m, profile))
    });
    match checked {
        Ok((fp, m, profile)) => {
            report.success_prob = Some(Real(profile.iter().sum()));
            report.measurement = Some(measurement_json(&m));
            report.detection_profile = Some(reals(&profile));
            report.fixed_point = Some(fp.into());
            if fp.is_fixed {
                report.finish(EXIT_OK, None)
            } else {
                report.finish(
                    EXIT_UNCERTIFIED,
                    Some(format!("not a fixed point (residual {:e})", fp.residual)),
                )
            }
        }
        Err(e) => report.failed(&e),
    }
}

/// Parse arguments, run, write the output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli);
    if let Some(text) = &outcome.output {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    if !cli.quiet {
                        eprintln!("error: cannot write {}: {e}", path.display());
                    }
                    return EXIT_NUMERICAL;
                }
            }
            None => print!("{text}"),
        }
    }
    if let (Some(msg), false) = (&outcome.diagnostic, cli.quiet) {
        eprintln!("{msg}");
    }
    outcome.code
}
