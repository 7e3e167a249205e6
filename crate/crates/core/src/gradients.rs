//! Analytic gradients of the spectral data, the symplectic pairing on
//! gradient fields, and the identity checks built on them.
//!
//! Gradients are taken with all `2N` coefficients `(x_k, b_k)` treated as
//! independent. [`GradField::project`] pulls a field back to the free chart,
//! where `x_N = -Σ_{k<N} x_k` and `b_N = -Σ_{k<N} b_k`.
//!
//! Hatted quantities (`φ̂`, `ϑ̂`) are the fundamental solutions at `λ = ν_n`,
//! tilded ones at `λ = ν_m`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fd::central_jacobian;
use crate::mo_map::{mo_data_from, mo_map};
use crate::potential::Potential;
use crate::recurrence::{
    dirichlet_solutions, discriminant, q_gradient_solutions, wronskian_unchecked, SolutionTable,
};
use crate::spectrum::{dirichlet_eigenvalues, gap_sign, spectral_data, SpectralData};

/// Sign `s` in `B_n ∧ d_qν_m = 2 s δ_{n,m}`, fixed by evaluation.
pub const EMPIRICAL_B_NU_SIGN: f64 = -1.0;

/// Below this `|ψ_{2,n}|` the Jacobian row of `ψ_{2,n}` is taken by finite
/// differences; the chain rule through the square root degenerates there.
pub const PSI2_CHAIN_RULE_FLOOR: f64 = 1e-6;

/// Step of the finite-difference fallback in [`mo_jacobian`].
pub const JACOBIAN_FD_STEP: f64 = 1e-6;

/// A field of pairs `(∂_{x_k}, ∂_{b_k})`, `k = 1..=N`, stored 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct GradField {
    pub dx: Vec<f64>,
    pub db: Vec<f64>,
}

impl GradField {
    pub fn new(dx: Vec<f64>, db: Vec<f64>) -> Result<Self> {
        if dx.len() != db.len() {
            return Err(Error::LengthMismatch {
                left: dx.len(),
                right: db.len(),
            });
        }
        Ok(Self { dx, db })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            dx: vec![0.0; n],
            db: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dx: self.dx.iter().map(|v| c * v).collect(),
            db: self.db.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &GradField, c: f64) -> Self {
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + c * y).collect();
        Self {
            dx: comb(&self.dx, &other.dx),
            db: comb(&self.db, &other.db),
        }
    }

    /// Gradient in free coordinates: `∂_{u_i} = ∂_{x_i} - ∂_{x_N}` for the
    /// first `N-1` entries and likewise for `b`.
    pub fn project(&self) -> Vec<f64> {
        let n = self.len();
        let (lx, lb) = (self.dx[n - 1], self.db[n - 1]);
        self.dx[..n - 1]
            .iter()
            .map(|v| v - lx)
            .chain(self.db[..n - 1].iter().map(|v| v - lb))
            .collect()
    }

    fn euclid(&self) -> f64 {
        self.dx.iter().chain(&self.db).map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// The pairing
/// `f ∧ g = Σ_n (f_{1,n} g_{2,n} - f_{2,n} g_{1,n}) - (f_{1,n-1} g_{2,n} - f_{2,n} g_{1,n-1})`
/// with component 1 the `x`-part, component 2 the `b`-part, and `f_{·,0} = f_{·,N}`.
pub fn symplectic_form(f: &GradField, g: &GradField) -> Result<f64> {
    if f.len() != g.len() || f.dx.len() != f.db.len() || g.dx.len() != g.db.len() {
        return Err(Error::LengthMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    let n = f.len();
    let mut s = 0.0;
    for i in 0..n {
        let prev = (i + n - 1) % n;
        s += f.dx[i] * g.db[i] - f.db[i] * g.dx[i];
        s -= f.dx[prev] * g.db[i] - f.db[i] * g.dx[prev];
    }
    Ok(s)
}

fn check_gap(p: &Potential, n: usize) -> Result<()> {
    let period = p.period();
    if n == 0 || n >= period {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: period - 1,
        });
    }
    Ok(())
}

/// `a_N φ̂_{N+1} φ̂'_N`, returned in its equivalent form `-Σ φ̂_j²`: the
/// product pairs a possibly tiny `φ̂_{N+1}` with a steep `φ̂'_N`, while the
/// sum has no cancellation.
fn nu_denominator(p: &Potential, t: &SolutionTable, n: usize) -> Result<f64> {
    let period = p.period();
    let den = p.a(period) * t.phi[period + 1] * t.dphi()[period];
    let norm: f64 = t.phi[1..=period].iter().map(|v| v * v).sum();
    if den.abs() < 1e-14 * (1.0 + norm) {
        return Err(Error::DegenerateDenominator { gap: n, value: den });
    }
    Ok(-norm)
}

fn grad_nu_table(p: &Potential, t: &SolutionTable, n: usize) -> Result<GradField> {
    let period = p.period();
    let den = nu_denominator(p, t, n)?;
    let phi = &t.phi;
    Ok(GradField {
        dx: (1..=period)
            .map(|k| -2.0 * p.a(k) * phi[k] * phi[k + 1] / den)
            .collect(),
        db: (1..=period).map(|k| -phi[k] * phi[k] / den).collect(),
    })
}

fn b_vector_table(p: &Potential, t: &SolutionTable) -> GradField {
    let period = p.period();
    let inv = 1.0 / p.a(period);
    let (phi, theta) = (&t.phi, &t.theta);
    GradField {
        dx: (1..=period)
            .map(|k| inv * p.a(k) * (phi[k + 1] * theta[k] + phi[k] * theta[k + 1]))
            .collect(),
        db: (1..=period).map(|k| inv * phi[k] * theta[k]).collect(),
    }
}

/// Differentiates `ψ_1 = log(s φ_{N+1}(ν))` through whichever of `φ_{N+1}`
/// and `ϑ_N = 1/φ_{N+1}` is larger. Algebraically this is
/// `-B_n + (φ̂'_{N+1}ϑ̂_N - φ̂'_Nϑ̂_{N+1}) d_qν_n`, but that form and the
/// small factor both lose digits once `|ψ_1|` reaches 8 or so.
fn grad_psi1_table(p: &Potential, t: &SolutionTable, n: usize) -> Result<GradField> {
    let period = p.period();
    let dnu = grad_nu_table(p, t, n)?;
    let q = q_gradient_solutions(p, t.lambda);
    let (end, dual) = (t.phi[period + 1], t.theta[period]);
    Ok(if end.abs() >= dual.abs() {
        q.phi_at(period + 1)
            .add_scaled(&dnu, t.dphi()[period + 1])
            .scaled(1.0 / end)
    } else {
        q.theta_at(period)
            .add_scaled(&dnu, t.dtheta()[period])
            .scaled(-1.0 / dual)
    })
}

fn dirichlet_table(p: &Potential, n: usize) -> Result<SolutionTable> {
    check_gap(p, n)?;
    let nu = dirichlet_eigenvalues(p)?[n - 1];
    Ok(dirichlet_solutions(p, nu))
}

/// `d_qν_n = -(2a_kφ̂_kφ̂_{k+1}, φ̂_k²) / (a_N φ̂_{N+1} φ̂'_N)`.
pub fn grad_nu(p: &Potential, n: usize) -> Result<GradField> {
    grad_nu_table(p, &dirichlet_table(p, n)?, n)
}

/// `B_n = (1/a_N)(a_k(φ̂_{k+1}ϑ̂_k + φ̂_kϑ̂_{k+1}), φ̂_kϑ̂_k)`.
pub fn b_vector(p: &Potential, n: usize) -> Result<GradField> {
    Ok(b_vector_table(p, &dirichlet_table(p, n)?))
}

/// `d_qψ_{1,n}`, equal to `-B_n + (φ̂'_{N+1}ϑ̂_N - φ̂'_Nϑ̂_{N+1}) d_qν_n`.
pub fn grad_psi1(p: &Potential, n: usize) -> Result<GradField> {
    grad_psi1_table(p, &dirichlet_table(p, n)?, n)
}

fn grad_lambda_at(p: &Potential, lambda: f64, n: usize) -> Result<GradField> {
    let d2 = discriminant(p, lambda).d2delta;
    if d2.abs() <= 1e-10 {
        return Err(Error::VanishingSecondDerivative { gap: n, value: d2 });
    }
    Ok(q_gradient_solutions(p, lambda).ddelta().scaled(-1.0 / d2))
}

/// `d_qλ_n = -∂Δ'(λ_n) / Δ''(λ_n)`.
pub fn grad_lambda_crit(p: &Potential, n: usize) -> Result<GradField> {
    check_gap(p, n)?;
    let spec = spectral_data(p)?;
    grad_lambda_at(p, spec.crit[n - 1], n)
}

fn grad_xi_at(p: &Potential, lambda: f64, height: f64, n: usize) -> GradField {
    // d cosh√ξ / dξ = sinh(√ξ) / (2√ξ)
    let slope = if height < 1e-8 {
        0.5
    } else {
        height.sinh() / (2.0 * height)
    };
    let s = gap_sign(p.period(), n);
    q_gradient_solutions(p, lambda).delta().scaled(s / slope)
}

/// `d_qξ_n = (-1)^{N-n} ∂Δ(λ_n) / (d cosh√ξ/dξ)` at `ξ = ξ_n`.
pub fn grad_xi(p: &Potential, n: usize) -> Result<GradField> {
    check_gap(p, n)?;
    let spec = spectral_data(p)?;
    let mo = mo_data_from(p, &spec)?;
    Ok(grad_xi_at(p, spec.crit[n - 1], mo.height[n - 1], n))
}

/// `Σ_{k=1}^N z_k Σ_{i≤k} w_i` and `Σ_{k=2}^N z_k Σ_{i<k} w_i` with their
/// swapped forms: `[(lhs, rhs); 2]`.
pub fn sum_swap(z: &[f64], w: &[f64]) -> Result<[(f64, f64); 2]> {
    if z.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: z.len(),
            right: w.len(),
        });
    }
    let n = z.len();
    let prefix = |k: usize| w[..k].iter().sum::<f64>();
    let suffix = |k: usize| z[k..].iter().sum::<f64>();
    let l1: f64 = (0..n).map(|k| z[k] * prefix(k + 1)).sum();
    let r1: f64 = (0..n).map(|k| w[k] * suffix(k)).sum();
    let l2: f64 = (1..n).map(|k| z[k] * prefix(k)).sum();
    let r2: f64 = (0..n.saturating_sub(1)).map(|k| w[k] * suffix(k + 1)).sum();
    Ok([(l1, r1), (l2, r2)])
}

/// One residual and the magnitude it should be judged against.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: f64,
    pub scale: f64,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            residual: 0.0,
            scale: 1.0,
        }
    }

    /// Records `|lhs - rhs|`, with every term magnitude feeding the scale.
    fn record(&mut self, lhs: f64, rhs: f64, terms: &[f64]) {
        self.residual = self.residual.max((lhs - rhs).abs());
        for t in terms.iter().chain([&lhs, &rhs]) {
            self.scale = self.scale.max(1.0 + t.abs());
        }
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol * self.scale
    }
}

/// Residuals of the Wronskian sum laws, the norm identity, the pairings of
/// `d_qν` and `B`, and the summation swap, for one pair of gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub m: usize,
    /// Wronskian sum laws and the norm identity.
    pub sum_laws: Vec<IdentityCheck>,
    /// Pairings `dν ∧ dν`, `B ∧ B`, `B ∧ dν`.
    pub pairings: Vec<IdentityCheck>,
    pub sum_swap: IdentityCheck,
    /// Names of checks that do not apply to this pair (`n = m`).
    pub skipped: Vec<&'static str>,
}

impl IdentityReport {
    pub fn all(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.sum_laws
            .iter()
            .chain(&self.pairings)
            .chain(std::iter::once(&self.sum_swap))
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.all().find(|c| c.name == name)
    }
}

/// Partial sums `Σ_{i=1}^k f_i g_i` for `k = 0..=N`.
fn partial_products(f: &[f64], g: &[f64], period: usize) -> Vec<f64> {
    let mut out = vec![0.0; period + 1];
    for k in 1..=period {
        out[k] = out[k - 1] + f[k] * g[k];
    }
    out
}

/// `{f, g}_k = offset + δ·sums[k]` for all `k = 0..=N`.
fn wronskian_law(
    check: &mut IdentityCheck,
    p: &Potential,
    f: &[f64],
    g: &[f64],
    offset: f64,
    delta: f64,
    sums: &[f64],
) {
    let mut running = 0.0;
    for (k, &s) in sums.iter().enumerate() {
        let w = wronskian_unchecked(p, f, g, k);
        // the Wronskian is a difference of two products and the partial sum
        // accumulates |f_j g_j|; both cancel, so their sizes set the scale
        let products = p.a(k) * ((f[k] * g[k + 1]).abs() + (f[k + 1] * g[k]).abs());
        if k > 0 {
            running += (f[k] * g[k]).abs();
        }
        check.record(w, offset + delta * s, &[delta * running, offset, products]);
    }
}

fn norm_identity(check: &mut IdentityCheck, p: &Potential, t: &SolutionTable) {
    let period = p.period();
    let lhs: f64 = t.phi[1..=period].iter().map(|v| v * v).sum();
    // summing {φ',φ}_j - {φ',φ}_{j-1} = -φ_j² gives the minus sign
    let rhs = -p.a(0) * t.phi[period + 1] * t.dphi()[period];
    check.record(lhs, rhs, &[]);
}

fn pairing(name: &'static str, f: &GradField, g: &GradField, target: f64) -> Result<IdentityCheck> {
    let mut c = IdentityCheck::new(name);
    let v = symplectic_form(f, g)?;
    c.record(v, target, &[f.euclid() * g.euclid()]);
    Ok(c)
}

/// Evaluates every identity for gaps `n`, `m` (1-based).
///
/// Sum identities with a `1/(ν_n - ν_m)` factor are checked multiplied
/// through by `ν_n - ν_m`.
pub fn verify_identities(p: &Potential, n: usize, m: usize) -> Result<IdentityReport> {
    check_gap(p, n)?;
    check_gap(p, m)?;
    let period = p.period();
    let nu = dirichlet_eigenvalues(p)?;
    let hat = dirichlet_solutions(p, nu[n - 1]);
    let tilde = dirichlet_solutions(p, nu[m - 1]);
    let a0 = p.a(0);

    let mut sum_laws = Vec::new();
    let mut skipped = Vec::new();
    let cross = [
        "phi_phi_sum",
        "phi_phi_wronskian",
        "theta_theta_sum",
        "theta_theta_wronskian",
        "phi_theta_sum",
        "phi_theta_wronskian",
        "theta_phi_sum",
        "theta_phi_wronskian",
    ];
    if n == m {
        skipped.extend(cross);
    } else {
        let d = nu[n - 1] - nu[m - 1];
        let (ph, th) = (&hat.phi, &hat.theta);
        let (pt, tt) = (&tilde.phi, &tilde.theta);
        let mut c: Vec<IdentityCheck> = cross.iter().map(|&s| IdentityCheck::new(s)).collect();

        let s = partial_products(ph, pt, period);
        c[0].record(s[period], 0.0, &abs_terms(ph, pt, period));
        wronskian_law(&mut c[1], p, pt, ph, 0.0, d, &s);

        let s = partial_products(th, tt, period);
        let w = wronskian_unchecked(p, tt, th, period);
        c[2].record(d * s[period], w, &[d * abs_terms(th, tt, period).iter().sum::<f64>()]);
        wronskian_law(&mut c[3], p, tt, th, 0.0, d, &s);

        let s = partial_products(th, pt, period);
        let rhs = a0 * (1.0 - pt[period + 1] * th[period]);
        c[4].record(d * s[period], rhs, &[d * abs_terms(th, pt, period).iter().sum::<f64>(), a0]);
        wronskian_law(&mut c[5], p, pt, th, -a0, d, &s);

        let s = partial_products(ph, tt, period);
        let rhs = a0 * (tt[period] * ph[period + 1] - 1.0);
        c[6].record(d * s[period], rhs, &[d * abs_terms(ph, tt, period).iter().sum::<f64>(), a0]);
        wronskian_law(&mut c[7], p, tt, ph, a0, d, &s);

        sum_laws.extend(c);
    }
    let mut norm = IdentityCheck::new("phi_norm");
    norm_identity(&mut norm, p, &hat);
    norm_identity(&mut norm, p, &tilde);
    sum_laws.push(norm);

    let (dnu_n, dnu_m) = (grad_nu_table(p, &hat, n)?, grad_nu_table(p, &tilde, m)?);
    let (b_n, b_m) = (b_vector_table(p, &hat), b_vector_table(p, &tilde));
    let delta = if n == m { 1.0 } else { 0.0 };
    let pairings = vec![
        pairing("nu_nu", &dnu_n, &dnu_m, 0.0)?,
        pairing("b_b", &b_n, &b_m, 0.0)?,
        pairing("b_nu", &b_n, &dnu_m, 2.0 * EMPIRICAL_B_NU_SIGN * delta)?,
    ];

    let mut rng = ChaCha8Rng::seed_from_u64((period * 1_000_003 + n * 1009 + m) as u64);
    let z: Vec<f64> = (0..period).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w: Vec<f64> = (0..period).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut swap = IdentityCheck::new("sum_swap");
    for (l, r) in sum_swap(&z, &w)? {
        swap.record(l, r, &[]);
    }

    Ok(IdentityReport {
        n,
        m,
        sum_laws,
        pairings,
        sum_swap: swap,
        skipped,
    })
}

fn abs_terms(f: &[f64], g: &[f64], period: usize) -> Vec<f64> {
    (1..=period).map(|j| (f[j] * g[j]).abs()).collect()
}

/// Conditioning of `{d_qν_n, d_qψ_{1,n}}` and the canonical pairings.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisReport {
    /// Smallest and largest singular value of the projected gradient matrix.
    pub sigma_min: f64,
    pub norm: f64,
    /// `max |dν_n ∧ dν_m|`.
    pub nu_nu: f64,
    /// `max |dψ_{1,n} ∧ dψ_{1,m}|`.
    pub psi_psi: f64,
    /// `max |dψ_{1,n} ∧ dν_m - 2δ_{n,m}|`.
    pub psi_nu: f64,
}

impl BasisReport {
    pub fn is_basis(&self) -> bool {
        self.sigma_min > 1e-10 * self.norm
    }
}

fn singular_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    let sv = m.singular_values();
    let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sv.iter().copied().fold(0.0, f64::max);
    (lo, hi)
}

/// Checks that `d_qν_n, d_qψ_{1,n}` form a basis and are canonically paired.
pub fn verify_basis(p: &Potential) -> Result<BasisReport> {
    let period = p.period();
    let nu = dirichlet_eigenvalues(p)?;
    let mut dnu = Vec::with_capacity(period - 1);
    let mut dpsi = Vec::with_capacity(period - 1);
    for n in 1..period {
        let t = dirichlet_solutions(p, nu[n - 1]);
        dnu.push(grad_nu_table(p, &t, n)?);
        dpsi.push(grad_psi1_table(p, &t, n)?);
    }
    let mut report = BasisReport {
        sigma_min: 0.0,
        norm: 0.0,
        nu_nu: 0.0,
        psi_psi: 0.0,
        psi_nu: 0.0,
    };
    for i in 0..period - 1 {
        for j in 0..period - 1 {
            let delta = if i == j { 2.0 } else { 0.0 };
            report.nu_nu = report.nu_nu.max(symplectic_form(&dnu[i], &dnu[j])?.abs());
            report.psi_psi = report.psi_psi.max(symplectic_form(&dpsi[i], &dpsi[j])?.abs());
            report.psi_nu = report
                .psi_nu
                .max((symplectic_form(&dpsi[i], &dnu[j])? - delta).abs());
        }
    }
    let dim = 2 * period - 2;
    let rows: Vec<Vec<f64>> = dnu.iter().chain(&dpsi).map(GradField::project).collect();
    let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    (report.sigma_min, report.norm) = singular_extremes(&m);
    Ok(report)
}

/// Jacobian of the packed MO vector with respect to the free coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MOJacobian {
    /// Row `2(n-1)` is `ψ_{1,n}`, row `2(n-1)+1` is `ψ_{2,n}`.
    pub matrix: DMatrix<f64>,
    /// Gaps whose `ψ_2` row came from finite differences.
    pub fd_rows: Vec<usize>,
}

/// Assembles `∂ψ/∂u` from the analytic gradients.
pub fn mo_jacobian(p: &Potential) -> Result<MOJacobian> {
    let spec = spectral_data(p)?;
    mo_jacobian_with(p, &spec)
}

pub(crate) fn mo_jacobian_with(p: &Potential, spec: &SpectralData) -> Result<MOJacobian> {
    let period = p.period();
    let dim = 2 * period - 2;
    let mo = mo_data_from(p, spec)?;
    let nu = dirichlet_eigenvalues(p)?;
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut fd_rows = Vec::new();
    let mut fd: Option<Vec<Vec<f64>>> = None;

    for n in 1..period {
        let t = dirichlet_solutions(p, nu[n - 1]);
        let dpsi1 = grad_psi1_table(p, &t, n)?.project();
        let r1 = 2 * (n - 1);
        for (j, v) in dpsi1.iter().enumerate() {
            matrix[(r1, j)] = *v;
        }
        let (psi1, psi2) = (mo.psi1[n - 1], mo.psi2[n - 1]);
        let row: Vec<f64> = if psi2.abs() > PSI2_CHAIN_RULE_FLOOR {
            let dxi = grad_xi_at(p, spec.crit[n - 1], mo.height[n - 1], n).project();
            dxi.iter()
                .zip(&dpsi1)
                .map(|(dx, d1)| (dx - 2.0 * psi1 * d1) / (2.0 * psi2))
                .collect()
        } else {
            fd_rows.push(n);
            if fd.is_none() {
                fd = Some(central_jacobian(
                    |u| mo_map(&Potential::embed(u, period)?),
                    &p.project(),
                    JACOBIAN_FD_STEP,
                )?);
            }
            fd.as_ref().unwrap()[r1 + 1].clone()
        };
        for (j, v) in row.iter().enumerate() {
            matrix[(r1 + 1, j)] = *v;
        }
    }
    let (lo, hi) = singular_extremes(&matrix);
    if !(lo >= 1e-12 * hi) {
        return Err(Error::SingularJacobian {
            sigma_min: lo,
            norm: hi,
        });
    }
    Ok(MOJacobian { matrix, fd_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::FreeCoords;

    fn pot(x: &[f64], b: &[f64]) -> Potential {
        Potential::new(x.to_vec(), b.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn two_site_closed_forms() {
        for (x1, beta) in [(0.0, 1.0), (0.4, -0.3), (-1.1, 2.0)] {
            let p = pot(&[x1, -x1], &[beta, -beta]);
            let dnu = grad_nu(&p, 1).unwrap();
            close(&dnu.dx, &[0.0, 0.0], 1e-14);
            close(&dnu.db, &[1.0, 0.0], 1e-14);
            let dpsi = grad_psi1(&p, 1).unwrap();
            close(&dpsi.dx, &[1.0, -1.0], 1e-13);
            close(&dpsi.db, &[0.0, 0.0], 1e-13);
            let dl = grad_lambda_crit(&p, 1).unwrap();
            close(&dl.dx, &[0.0, 0.0], 1e-13);
            close(&dl.db, &[0.5, 0.5], 1e-13);
            assert!((symplectic_form(&dpsi, &dnu).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symplectic_form_basics() {
        let f = GradField::new(vec![1.0, -1.0], vec![0.0, 0.0]).unwrap();
        let g = GradField::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(symplectic_form(&f, &g).unwrap(), 2.0);
        assert_eq!(symplectic_form(&g, &f).unwrap(), -2.0);
        assert_eq!(symplectic_form(&f, &f).unwrap(), 0.0);
        let h = GradField::zeros(3);
        assert!(matches!(
            symplectic_form(&f, &h),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(GradField::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn projection_matches_chart() {
        let f = GradField::new(vec![1.0, 2.0, 4.0], vec![-1.0, 0.5, 0.25]).unwrap();
        assert_eq!(f.project(), vec![-3.0, -2.0, -1.25, 0.25]);
    }

    #[test]
    fn sum_swap_on_ones() {
        let ones = vec![1.0; 4];
        let [(l1, r1), (l2, r2)] = sum_swap(&ones, &ones).unwrap();
        assert_eq!((l1, r1, l2, r2), (10.0, 10.0, 6.0, 6.0));
    }

    #[test]
    fn identities_on_random_potential() {
        let p = Potential::random(6, 1.0, 4).unwrap();
        let r = verify_identities(&p, 1, 2).unwrap();
        for c in r.all() {
            assert!(c.passes(1e-8), "{c:?}");
        }
        assert!(r.skipped.is_empty());
        let r = verify_identities(&p, 3, 3).unwrap();
        assert!(r.skipped.contains(&"phi_phi_sum"));
        assert!(r.get("phi_norm").unwrap().passes(1e-8));
        assert!(r.get("b_nu").unwrap().passes(1e-8), "{:?}", r.get("b_nu"));
    }

    #[test]
    fn b_nu_pairing_sign() {
        for seed in 0..10 {
            let p = Potential::random(2 + seed as usize % 6, 1.0, seed).unwrap();
            for n in 1..p.period() {
                let v = symplectic_form(&b_vector(&p, n).unwrap(), &grad_nu(&p, n).unwrap()).unwrap();
                assert!((v - 2.0 * EMPIRICAL_B_NU_SIGN).abs() < 1e-8, "{v}");
            }
        }
    }

    #[test]
    fn basis_on_random_potential() {
        let p = Potential::random(8, 1.0, 11).unwrap();
        let r = verify_basis(&p).unwrap();
        assert!(r.psi_psi <= 1e-7 && r.nu_nu <= 1e-7 && r.psi_nu <= 1e-7, "{r:?}");
        assert!(r.is_basis());
        let r = verify_basis(&pot(&[0.0, 0.0], &[1.0, -1.0])).unwrap();
        assert!(r.psi_nu < 1e-10);
    }

    #[test]
    fn jacobian_first_row_two_site() {
        let p = pot(&[0.0, 0.0], &[1.0, -1.0]);
        let j = mo_jacobian(&p).unwrap();
        assert!((j.matrix[(0, 0)] - 2.0).abs() < 1e-12);
        assert!(j.matrix[(0, 1)].abs() < 1e-12);
        assert!(j.fd_rows.is_empty());
    }

    #[test]
    fn jacobian_at_zero_uses_differences() {
        let p = Potential::zero(2).unwrap();
        let j = mo_jacobian(&p).unwrap();
        assert_eq!(j.fd_rows, vec![1]);
        let fd = central_jacobian(
            |u: &FreeCoords| mo_map(&Potential::embed(u, 2)?),
            &p.project(),
            1e-6,
        )
        .unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((j.matrix[(r, c)] - fd[r][c]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn rejects_bad_gap_index() {
        let p = Potential::zero(3).unwrap();
        assert!(matches!(grad_nu(&p, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(grad_psi1(&p, 3), Err(Error::IndexOutOfRange { .. })));
    }
}
