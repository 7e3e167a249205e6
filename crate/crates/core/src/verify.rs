//! Randomized verification suites behind `periodic-jacobi verify`.
//!
//! Each suite draws `trials` potentials of period `n` with
//! [`Potential::random`] (scale 1, seeds `seed, seed + 1, ...`) and reports
//! the worst residual it saw against a fixed threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{central_gradient, central_jacobian};
use crate::gradients::{
    grad_lambda_crit, grad_nu, grad_psi1, grad_xi, mo_jacobian, verify_basis, verify_identities,
    GradField,
};
use crate::mo_map::{mo_data, mo_map, norming_constant};
use crate::potential::{FreeCoords, Potential};
use crate::quasimomentum::{verify_estimates, ESTIMATE_SLACK};
use crate::recurrence::{evaluate_solutions, wronskian_unchecked};
use crate::spectrum::{critical_points, band_edges, dirichlet_eigenvalues};

/// Scale of the random potentials drawn by the suites.
pub const SUITE_SCALE: f64 = 1.0;
/// Finite-difference step of the gradient suite.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Wronskian,
    /// Wronskian sum laws and the norm identity at Dirichlet points.
    #[serde(rename = "lemma31")]
    SumLaws,
    /// Canonical pairings of `d_qν`, `d_qψ_1` and `B`, and the basis property.
    #[serde(rename = "theorem13")]
    Pairings,
    Gradcheck,
    Estimates,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Wronskian,
        Suite::SumLaws,
        Suite::Pairings,
        Suite::Gradcheck,
        Suite::Estimates,
    ];

    pub fn threshold(self) -> f64 {
        match self {
            Suite::Wronskian => 1e-9,
            Suite::SumLaws => 1e-8,
            Suite::Pairings => 1e-7,
            Suite::Gradcheck => 1e-5,
            Suite::Estimates => ESTIMATE_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Free-form notes, e.g. flagged equality cases or the worst seed.
    pub notes: Vec<String>,
}

struct Tracker {
    worst: f64,
    worst_seed: u64,
    notes: Vec<String>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            worst: 0.0,
            worst_seed: 0,
            notes: Vec::new(),
        }
    }

    fn see(&mut self, residual: f64, seed: u64) {
        // NaN counts as the worst possible outcome
        if residual.is_nan() || residual > self.worst {
            self.worst = if residual.is_nan() { f64::INFINITY } else { residual };
            self.worst_seed = seed;
        }
    }

    fn finish(mut self, suite: Suite, trials: usize) -> SuiteReport {
        let threshold = suite.threshold();
        if trials > 0 {
            self.notes.push(format!("worst seed {}", self.worst_seed));
        }
        SuiteReport {
            suite,
            trials,
            max_residual: self.worst,
            threshold,
            passed: self.worst <= threshold,
            notes: self.notes,
        }
    }
}

/// Wronskian constancy and `φ_{N+1}ϑ_N - φ_Nϑ_{N+1} = 1` at one point.
///
/// Inside a gap the solutions grow like `e^{N·im κ}` and both identities
/// cancel products of that size, so residuals are measured against them.
fn wronskian_trial(p: &Potential, lambda: f64) -> f64 {
    let n = p.period();
    let t = evaluate_solutions(p, lambda, 0);
    let a_n = p.a(n);
    let constancy = (0..=n)
        .map(|k| {
            let size = p.a(k) * ((t.theta[k] * t.phi[k + 1]).abs() + (t.theta[k + 1] * t.phi[k]).abs());
            (wronskian_unchecked(p, &t.theta, &t.phi, k) - a_n).abs() / a_n.max(1.0) / size.max(1.0)
        })
        .fold(0.0, f64::max);
    let (l, r) = (t.phi[n + 1] * t.theta[n], t.phi[n] * t.theta[n + 1]);
    constancy.max((l - r - 1.0).abs() / (l.abs() + r.abs()).max(1.0))
}

fn relative_gap(analytic: &[f64], oracle: &[f64]) -> f64 {
    let diff = analytic
        .iter()
        .zip(oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let size = oracle.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    diff / size
}

/// Worst relative deviation of every analytic gradient from central differences.
pub fn gradcheck(p: &Potential) -> Result<f64> {
    let n = p.period();
    let u = p.project();
    let at = |v: &FreeCoords| Potential::embed(v, n);
    let mut worst = 0.0f64;
    let mut track = |analytic: GradField, oracle: Vec<f64>| {
        worst = worst.max(relative_gap(&analytic.project(), &oracle));
    };
    let edges = band_edges(p)?;
    let scale = 1.0 + edges.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    for gap in 1..n {
        track(
            grad_nu(p, gap)?,
            central_gradient(|v| Ok(dirichlet_eigenvalues(&at(v)?)?[gap - 1]), &u, FD_STEP)?,
        );
        track(
            grad_psi1(p, gap)?,
            central_gradient(
                |v| {
                    let q = at(v)?;
                    norming_constant(&q, dirichlet_eigenvalues(&q)?[gap - 1], gap)
                },
                &u,
                FD_STEP,
            )?,
        );
        track(
            grad_xi(p, gap)?,
            central_gradient(|v| Ok(mo_data(&at(v)?)?.1.xi[gap - 1]), &u, FD_STEP)?,
        );
        let width = edges[2 * gap] - edges[2 * gap - 1];
        if width > 1e-6 * scale {
            track(
                grad_lambda_crit(p, gap)?,
                central_gradient(
                    |v| {
                        let q = at(v)?;
                        Ok(critical_points(&q, &band_edges(&q)?)?[gap - 1])
                    },
                    &u,
                    FD_STEP,
                )?,
            );
        }
    }
    let jac = mo_jacobian(p)?;
    let fd = central_jacobian(|v| mo_map(&at(v)?), &u, FD_STEP)?;
    for (i, row) in fd.iter().enumerate() {
        let analytic: Vec<f64> = jac.matrix.row(i).iter().copied().collect();
        worst = worst.max(relative_gap(&analytic, row));
    }
    Ok(worst)
}

/// Runs one suite.
pub fn run_suite(suite: Suite, n: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    if n < 2 {
        return Err(Error::PeriodTooSmall(n));
    }
    let mut tr = Tracker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equalities = 0usize;
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let p = Potential::random(n, SUITE_SCALE, s)?;
        match suite {
            Suite::Wronskian => {
                // bounded solutions only: sample inside the spectral hull
                let edges = band_edges(&p)?;
                let lambda = rng.random_range(edges[0]..=edges[2 * n - 1]);
                tr.see(wronskian_trial(&p, lambda), s);
            }
            Suite::SumLaws => {
                for a in 1..n {
                    for b in 1..n {
                        let r = verify_identities(&p, a, b)?;
                        let worst = r.sum_laws.iter().map(|c| c.relative()).fold(0.0, f64::max);
                        tr.see(worst, s);
                    }
                }
            }
            Suite::Pairings => {
                let b = verify_basis(&p)?;
                tr.see(b.nu_nu.max(b.psi_psi).max(b.psi_nu), s);
                if !b.is_basis() {
                    tr.see(f64::INFINITY, s);
                }
                for a in 1..n {
                    for c in 1..n {
                        let r = verify_identities(&p, a, c)?;
                        // B_n carries ϑ, which grows like e^{|ψ_1|}, so these
                        // pairings are judged against the size of their terms
                        for check in &r.pairings {
                            tr.see(check.relative(), s);
                        }
                    }
                }
            }
            Suite::Gradcheck => tr.see(gradcheck(&p)?, s),
            Suite::Estimates => {
                let r = verify_estimates(&p)?;
                let chain = r.chain();
                let worst = (0..4)
                    .map(|i| -r.margins[i] / (1.0 + chain[i + 1].abs()))
                    .fold(0.0, f64::max);
                tr.see(worst, s);
                equalities += r.equalities.iter().filter(|&&e| e).count();
            }
        }
    }
    if equalities > 0 {
        tr.notes.push(format!("{equalities} comparisons hold with equality"));
    }
    Ok(tr.finish(suite, trials))
}
