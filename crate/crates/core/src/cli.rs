//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification threshold was violated, 2 bad
//! input, 3 numerical failure. Output is assembled in memory and written
//! only on success, so a failing command never leaves partial output.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::inverse::{solve_inverse, InverseOptions};
use crate::mo_map::mo_data;
use crate::potential::Potential;
use crate::quasimomentum::kappa_on_real_axis;
use crate::verify::{run_suite, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "periodic-jacobi", version, about = "Spectral and inverse spectral computations for periodic Jacobi matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band edges, auxiliary spectra and MO data of a potential file.
    Forward {
        /// Potential JSON `{"N", "x", "b"}`, or `-` for stdin.
        input: PathBuf,
    },
    /// Reconstruct a potential from `{"N", "psi"}`.
    Inverse {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Newton iterations per continuation leg.
        #[arg(long, default_value_t = 50)]
        max_steps: usize,
    },
    /// Randomized identity and gradient checks.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Quasimomentum samples along the spectrum as CSV.
    Kappa {
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        points_per_band: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Wronskian,
    #[value(name = "lemma31")]
    SumLaws,
    #[value(name = "theorem13")]
    Pairings,
    Gradcheck,
    Estimates,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Wronskian => vec![Suite::Wronskian],
            SuiteArg::SumLaws => vec![Suite::SumLaws],
            SuiteArg::Pairings => vec![Suite::Pairings],
            SuiteArg::Gradcheck => vec![Suite::Gradcheck],
            SuiteArg::Estimates => vec![Suite::Estimates],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: Vec<f64>,
    pub b: Vec<f64>,
}

impl PotentialFile {
    pub fn from_potential(p: &Potential) -> Self {
        Self {
            n: p.period(),
            x: p.x().to_vec(),
            b: p.b_seq().to_vec(),
        }
    }

    pub fn to_potential(&self) -> Result<Potential, Error> {
        for (name, v) in [("x", &self.x), ("b", &self.b)] {
            if v.len() != self.n {
                return Err(Error::InvalidArgument(format!(
                    "N = {} but {name} has {} entries",
                    self.n,
                    v.len()
                )));
            }
        }
        Potential::new(self.x.clone(), self.b.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub psi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub edges: Vec<f64>,
    pub nu: Vec<f64>,
    pub mu: Vec<f64>,
    pub crit: Vec<f64>,
    pub psi1: Vec<f64>,
    pub psi2: Vec<f64>,
    pub heights: Vec<f64>,
    pub gap_closed: Vec<bool>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    n: usize,
    trials: usize,
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Self {
        Failure(EXIT_INPUT, format!("error: {msg}"))
    }

    /// Input errors map to 2, everything numerical to 3.
    fn from_error(e: Error) -> Self {
        let code = match e {
            Error::SumNotZero { .. }
            | Error::PeriodTooSmall(_)
            | Error::DimensionMismatch { .. }
            | Error::LengthMismatch { .. }
            | Error::InvalidArgument(_) => EXIT_INPUT,
            _ => EXIT_SOLVER,
        };
        Failure(code, format!("error: {e}"))
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn forward(input: &Path) -> Result<String, Failure> {
    let file: PotentialFile = parse(input)?;
    let p = file.to_potential().map_err(Failure::from_error)?;
    let (spec, mo) = mo_data(&p).map_err(Failure::from_error)?;
    Ok(to_json(&SpectrumFile {
        edges: spec.edges,
        nu: spec.nu,
        mu: spec.mu,
        crit: spec.crit,
        psi1: mo.psi1,
        psi2: mo.psi2,
        heights: mo.height,
        gap_closed: spec.gap_closed,
    }))
}

fn inverse(input: &Path, tol: f64, max_steps: usize) -> Result<String, Failure> {
    let file: PsiFile = parse(input)?;
    let opts = InverseOptions {
        tol,
        max_newton: max_steps,
        ..InverseOptions::default()
    };
    match solve_inverse(&file.psi, file.n, &opts) {
        Ok(r) => Ok(to_json(&PotentialFile::from_potential(&r.q))),
        Err(Error::HomotopyStalled { s, residual, path }) => {
            let mut msg = format!("error: continuation stalled at s = {s} with residual {residual:e}\npath:\n");
            for pt in &path {
                msg.push_str(&format!("  s = {:.6}  residual = {:.3e}\n", pt.s, pt.residual));
            }
            Err(Failure(EXIT_SOLVER, msg.trim_end().to_string()))
        }
        Err(e) => Err(Failure::from_error(e)),
    }
}

fn verify(n: usize, trials: usize, seed: u64, suite: SuiteArg) -> Result<(String, bool), Failure> {
    if n < 2 {
        return Err(Failure::from_error(Error::PeriodTooSmall(n)));
    }
    let suites = suite
        .suites()
        .into_iter()
        .map(|s| run_suite(s, n, trials, seed))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::from_error)?;
    let passed = suites.iter().all(|s| s.passed);
    let report = VerifyReport {
        n,
        trials,
        seed,
        passed,
        suites,
    };
    Ok((to_json(&report), passed))
}

fn kappa(input: &Path, points: usize) -> Result<String, Failure> {
    if points < 2 {
        return Err(Failure::input(format!("--points-per-band must be >= 2, got {points}")));
    }
    let file: PotentialFile = parse(input)?;
    let p = file.to_potential().map_err(Failure::from_error)?;
    let spec = crate::spectrum::spectral_data(&p).map_err(Failure::from_error)?;
    let samples = kappa_on_real_axis(&p, &spec, points).map_err(Failure::from_error)?;
    let mut out = String::from("lambda,re_kappa,im_kappa_plus\n");
    for s in samples {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.lambda, s.re_kappa, s.im_kappa));
    }
    Ok(out)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Forward { input } => forward(&input).map(|s| (s, true)),
        Command::Inverse {
            input,
            tol,
            max_steps,
        } => inverse(&input, tol, max_steps).map(|s| (s, true)),
        Command::Verify {
            n,
            trials,
            seed,
            suite,
        } => verify(n, trials, seed, suite),
        Command::Kappa {
            input,
            points_per_band,
        } => kappa(&input, points_per_band).map(|s| (s, true)),
    };
    match result {
        Ok((text, ok)) => {
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_SOLVER;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}
