//! Spectral landmarks of a periodic Jacobi matrix: band edges, Dirichlet and
//! Neumann eigenvalues, and the critical points of the discriminant.
//!
//! Band edges are the eigenvalues of the periodic (`Δ = +1`) and
//! antiperiodic (`Δ = -1`) N×N matrices; Dirichlet and Neumann eigenvalues
//! are eigenvalues of the two (N-1)×(N-1) truncations. Every eigenvalue is
//! tied back to the recurrence by a residual check on `Δ ∓ 1`, `φ_N` or
//! `ϑ_{N+1}`.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::recurrence::{discriminant, discriminant_first, evaluate_solutions};
use crate::tridiag::{symmetric_eigenvalues, TridiagonalSpec};

/// Relative width below which a gap is treated as closed.
pub const CLOSED_GAP_TOL: f64 = 1e-10;
/// Relative tolerance of the recurrence residual checks.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// `(-1)^{N-n}`, the sign of `Δ` on gap `n`.
#[inline]
pub fn gap_sign(period: usize, n: usize) -> f64 {
    if (period - n) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Band edges, auxiliary spectra and critical points.
///
/// `edges` holds `λ_0^+ < λ_1^- <= λ_1^+ < ... <= λ_{N-1}^+ < λ_N^-`.
/// On a closed gap `nu`, `mu` and `crit` are all set to `λ_n^-`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub edges: Vec<f64>,
    pub nu: Vec<f64>,
    pub mu: Vec<f64>,
    pub crit: Vec<f64>,
    pub gap_closed: Vec<bool>,
}

impl SpectralData {
    pub fn period(&self) -> usize {
        self.edges.len() / 2
    }

    /// `λ_n^-` for `n = 1..=N`.
    pub fn lower(&self, n: usize) -> f64 {
        self.edges[2 * n - 1]
    }

    /// `λ_n^+` for `n = 0..N`.
    pub fn upper(&self, n: usize) -> f64 {
        self.edges[2 * n]
    }

    /// Band `σ_n = [λ_{n-1}^+, λ_n^-]`, `n = 1..=N`.
    pub fn band(&self, n: usize) -> (f64, f64) {
        (self.upper(n - 1), self.lower(n))
    }

    /// Gap closure `[λ_n^-, λ_n^+]`, `n = 1..N`.
    pub fn gap(&self, n: usize) -> (f64, f64) {
        (self.lower(n), self.upper(n))
    }

    /// `λ_N^- - λ_0^+`.
    pub fn width(&self) -> f64 {
        self.edges[self.edges.len() - 1] - self.edges[0]
    }

    /// `1 + max|edge|`, the unit for comparisons on the λ axis.
    pub fn spectral_scale(&self) -> f64 {
        1.0 + self.edges.iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }
}

/// Gershgorin radius of the periodic matrix; bounds every landmark.
fn gershgorin(p: &Potential) -> f64 {
    (1..=p.period())
        .map(|j| p.b(j).abs() + p.a(j - 1) + p.a(j))
        .fold(0.0, f64::max)
}

/// `1 + R^N / Π a_n`: magnitude scale of the degree-N polynomials `φ_{N+1}`,
/// `2Δ` on `|λ| <= R`.
pub fn residual_scale(p: &Potential, radius: f64) -> f64 {
    let prod: f64 = p.a_seq().iter().product();
    1.0 + radius.powi(p.period() as i32) / prod
}

fn periodic_matrix(p: &Potential, sign: f64) -> Result<TridiagonalSpec> {
    let n = p.period();
    TridiagonalSpec::new(
        p.b_seq().to_vec(),
        p.a_seq()[..n - 1].to_vec(),
        sign * p.a(n),
    )
}

/// The `2N` roots of `Δ² = 1`, sorted and checked against the ordering chain.
pub fn band_edges(p: &Potential) -> Result<Vec<f64>> {
    let n = p.period();
    let mut roots: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
    for sign in [1.0, -1.0] {
        let ev = symmetric_eigenvalues(&periodic_matrix(p, sign)?)?;
        roots.extend(ev.into_iter().map(|e| (e, sign)));
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));

    let radius = roots.iter().fold(0.0f64, |m, r| m.max(r.0.abs()));
    let tol = RESIDUAL_TOL * residual_scale(p, radius);
    for &(e, sign) in &roots {
        let residual = (discriminant_first(p, e).0 - sign).abs();
        if residual > tol {
            return Err(Error::ResidualTooLarge {
                what: "band edge |Δ ∓ 1|",
                residual,
                tol,
            });
        }
    }

    let expected = |pos: usize| -> f64 {
        if pos == 2 * n - 1 {
            1.0
        } else {
            // pos 0 is λ_0^+ (gap "0"), pos 2m-1 and 2m belong to gap m
            gap_sign(n, pos.div_ceil(2))
        }
    };
    for (pos, &(e, sign)) in roots.iter().enumerate() {
        if sign != expected(pos) {
            return Err(Error::OrderingViolation {
                position: pos,
                detail: format!("edge {e} has Δ = {sign}, expected {}", expected(pos)),
            });
        }
    }
    for m in 0..n {
        let (lo, hi) = (roots[2 * m].0, roots[2 * m + 1].0);
        if !(lo < hi) {
            return Err(Error::OrderingViolation {
                position: 2 * m + 1,
                detail: format!("band {} is degenerate: [{lo}, {hi}]", m + 1),
            });
        }
    }
    Ok(roots.into_iter().map(|r| r.0).collect())
}

fn check_simple_increasing(values: &[f64], what: &'static str) -> Result<()> {
    for (i, w) in values.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Err(Error::OrderingViolation {
                position: i + 1,
                detail: format!("{what} not strictly increasing: {} >= {}", w[0], w[1]),
            });
        }
    }
    Ok(())
}

/// Zeros of `φ_N`: eigenvalues of the truncation with diagonal `b_1..b_{N-1}`.
pub fn dirichlet_eigenvalues(p: &Potential) -> Result<Vec<f64>> {
    let n = p.period();
    let t = TridiagonalSpec::new(
        p.b_seq()[..n - 1].to_vec(),
        p.a_seq()[..n.saturating_sub(2)].to_vec(),
        0.0,
    )?;
    let mut nu = symmetric_eigenvalues(&t)?;
    for v in nu.iter_mut() {
        *v = polish_root(*v, |t| (t.phi[n], t.dphi()[n]), p);
    }
    let tol = RESIDUAL_TOL * residual_scale(p, gershgorin(p));
    for &v in &nu {
        let residual = evaluate_solutions(p, v, 0).phi[n].abs();
        if residual > tol {
            return Err(Error::ResidualTooLarge {
                what: "Dirichlet |φ_N|",
                residual,
                tol,
            });
        }
    }
    check_simple_increasing(&nu, "Dirichlet eigenvalues")?;
    Ok(nu)
}

/// A few guarded Newton steps on a recurrence polynomial, starting from an
/// eigensolver value. The eigenvalue is accurate to a few ulps of the matrix
/// norm, but the norming constants are evaluated at this point and the
/// polynomials there can be steep; every ulp matters.
fn polish_root(
    start: f64,
    eval: impl Fn(&crate::recurrence::SolutionTable) -> (f64, f64),
    p: &Potential,
) -> f64 {
    let mut x = start;
    let (mut f, mut df) = eval(&evaluate_solutions(p, x, 1));
    let limit = 1e-8 * (1.0 + start.abs());
    for _ in 0..3 {
        if f == 0.0 || df == 0.0 {
            break;
        }
        let next = x - f / df;
        if (next - start).abs() > limit {
            break;
        }
        let (g, dg) = eval(&evaluate_solutions(p, next, 1));
        if g.abs() >= f.abs() {
            break;
        }
        x = next;
        f = g;
        df = dg;
    }
    x
}

/// Zeros of `ϑ_{N+1}`: eigenvalues of the truncation with diagonal `b_2..b_N`.
pub fn neumann_eigenvalues(p: &Potential) -> Result<Vec<f64>> {
    let n = p.period();
    let t = TridiagonalSpec::new(
        p.b_seq()[1..].to_vec(),
        p.a_seq()[1..n - 1].to_vec(),
        0.0,
    )?;
    let mut mu = symmetric_eigenvalues(&t)?;
    for v in mu.iter_mut() {
        *v = polish_root(*v, |t| (t.theta[n + 1], t.dtheta()[n + 1]), p);
    }
    let tol = RESIDUAL_TOL * residual_scale(p, gershgorin(p));
    for &v in &mu {
        let residual = evaluate_solutions(p, v, 0).theta[n + 1].abs();
        if residual > tol {
            return Err(Error::ResidualTooLarge {
                what: "Neumann |ϑ_{N+1}|",
                residual,
                tol,
            });
        }
    }
    check_simple_increasing(&mu, "Neumann eigenvalues")?;
    Ok(mu)
}

fn is_closed(edges: &[f64], n: usize, scale: f64) -> bool {
    edges[2 * n] - edges[2 * n - 1] <= CLOSED_GAP_TOL * scale
}

/// Stationary points `λ_n` of `Δ`, one per gap closure.
pub fn critical_points(p: &Potential, edges: &[f64]) -> Result<Vec<f64>> {
    let period = p.period();
    if edges.len() != 2 * period {
        return Err(Error::DimensionMismatch {
            expected: 2 * period,
            got: edges.len(),
        });
    }
    let scale = 1.0 + edges.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    (1..period)
        .map(|n| {
            if is_closed(edges, n, scale) {
                Ok(edges[2 * n - 1])
            } else {
                critical_point_in_gap(p, n, edges[2 * n - 1], edges[2 * n], scale)
            }
        })
        .collect()
}

fn critical_point_in_gap(p: &Potential, n: usize, lo: f64, hi: f64, scale: f64) -> Result<f64> {
    let slope = |l: f64| discriminant_first(p, l).1;
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (slope(a), slope(b));
    if fa == 0.0 {
        return finish_critical(p, n, a, scale);
    }
    if fb == 0.0 {
        return finish_critical(p, n, b, scale);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure { gap: n });
    }
    let mut sa = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = slope(mid);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == sa {
            a = mid;
            sa = fm.signum();
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    // a couple of Newton steps, kept only while they stay in the gap
    for _ in 0..3 {
        let d = discriminant(p, x);
        if d.d2delta == 0.0 {
            break;
        }
        let next = x - d.ddelta / d.d2delta;
        if !(next >= lo && next <= hi) || next == x {
            break;
        }
        x = next;
    }
    finish_critical(p, n, x, scale)
}

fn finish_critical(p: &Potential, n: usize, x: f64, scale: f64) -> Result<f64> {
    let d = discriminant(p, x);
    // rounding floor of Δ' itself, from the magnitude of Δ'' over the gap
    let tol = 1e-11 * d.d2delta.abs() * scale + 1e-13 * (1.0 + d.delta.abs());
    if d.ddelta.abs() > tol {
        return Err(Error::ResidualTooLarge {
            what: "critical point |Δ'|",
            residual: d.ddelta.abs(),
            tol,
        });
    }
    let value = gap_sign(p.period(), n) * d.delta;
    if value < 1.0 - 1e-12 {
        return Err(Error::BelowOne { gap: n, value });
    }
    Ok(x)
}

/// Full landmark set, with closed gaps snapped to their common edge.
pub fn spectral_data(p: &Potential) -> Result<SpectralData> {
    let period = p.period();
    let edges = band_edges(p)?;
    let mut nu = dirichlet_eigenvalues(p)?;
    let mut mu = neumann_eigenvalues(p)?;
    let crit = critical_points(p, &edges)?;
    let scale = 1.0 + edges.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let gap_closed: Vec<bool> = (1..period).map(|n| is_closed(&edges, n, scale)).collect();
    for (i, &closed) in gap_closed.iter().enumerate() {
        if closed {
            nu[i] = edges[2 * i + 1];
            mu[i] = edges[2 * i + 1];
        }
    }
    Ok(SpectralData {
        edges,
        nu,
        mu,
        crit,
        gap_closed,
    })
}
