//! Fundamental solutions of the three-term recurrence
//! `a_{j-1} y_{j-1} + b_j y_j + a_j y_{j+1} = λ y_j`.
//!
//! `φ` starts from `(φ_0, φ_1) = (0, 1)` and `ϑ` from `(ϑ_0, ϑ_1) = (1, 0)`.
//! Both are evaluated by forward recursion over `j = 1..=N`, giving tables on
//! indices `0..=N+1`. Derivatives in `λ` and in the coefficients are obtained
//! by differentiating the recursion itself, so they are exact up to rounding.

use crate::error::{Error, Result};
use crate::gradients::GradField;
use crate::potential::Potential;

/// Values of `φ` and `ϑ` (and optionally their `λ`-derivatives) on `0..=N+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    pub lambda: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    /// `∂_λ φ`, present when evaluated with `deriv_order >= 1`.
    pub dphi: Option<Vec<f64>>,
    pub dtheta: Option<Vec<f64>>,
    /// `∂²_λ φ`, present when evaluated with `deriv_order == 2`.
    pub d2phi: Option<Vec<f64>>,
    pub d2theta: Option<Vec<f64>>,
}

impl SolutionTable {
    pub fn period(&self) -> usize {
        self.phi.len() - 2
    }

    /// `Δ = (φ_{N+1} + ϑ_N) / 2`.
    pub fn delta(&self) -> f64 {
        let n = self.period();
        0.5 * (self.phi[n + 1] + self.theta[n])
    }

    pub fn dphi(&self) -> &[f64] {
        self.dphi.as_deref().expect("table evaluated without first derivative")
    }

    pub fn dtheta(&self) -> &[f64] {
        self.dtheta.as_deref().expect("table evaluated without first derivative")
    }
}

/// `φ`, `ϑ` and their `λ`-derivatives at a Dirichlet eigenvalue `ν`.
///
/// A computed `ν` sits within rounding of the zero of `φ_N`, and the
/// solutions there can be steep in `λ`. The tables are moved to the zero to
/// first order, `y_k - y'_k φ_N/φ'_N`, so quantities that assume `φ_N(ν) = 0`
/// (and `φ_{N+1}ϑ_N = 1`) see it. Points farther than rounding from a zero
/// are returned unchanged.
pub fn dirichlet_solutions(p: &Potential, nu: f64) -> SolutionTable {
    let n = p.period();
    let mut t = evaluate_solutions(p, nu, 1);
    let offset = t.phi[n] / t.dphi()[n];
    if offset.is_finite() && offset.abs() <= 1e-12 * (1.0 + nu.abs()) {
        let (dphi, dtheta) = (t.dphi().to_vec(), t.dtheta().to_vec());
        for k in 0..=n + 1 {
            t.phi[k] -= offset * dphi[k];
            t.theta[k] -= offset * dtheta[k];
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantValue {
    pub delta: f64,
    pub ddelta: f64,
    pub d2delta: f64,
}

/// Runs `y_{j+1} = ((λ - b_j) y_j - a_{j-1} y_{j-1} + src_j) / a_j` for `j = 1..=N`.
#[inline]
fn recur(p: &Potential, lambda: f64, y: &mut [f64], source: impl Fn(usize) -> f64) {
    let n = p.period();
    for j in 1..=n {
        y[j + 1] = ((lambda - p.b(j)) * y[j] - p.a(j - 1) * y[j - 1] + source(j)) / p.a(j);
    }
}

/// Evaluates `φ`, `ϑ` at `λ` with `λ`-derivatives up to `deriv_order` (0, 1 or 2).
pub fn evaluate_solutions(p: &Potential, lambda: f64, deriv_order: usize) -> SolutionTable {
    let n = p.period();
    let base = |y0: f64, y1: f64| {
        let mut y = vec![0.0; n + 2];
        y[0] = y0;
        y[1] = y1;
        recur(p, lambda, &mut y, |_| 0.0);
        y
    };
    let phi = base(0.0, 1.0);
    let theta = base(1.0, 0.0);

    // differentiating the recursion k times in λ adds the source k·y^{(k-1)}_j
    let derive = |lower: &[f64], order: f64| {
        let mut d = vec![0.0; n + 2];
        recur(p, lambda, &mut d, |j| order * lower[j]);
        d
    };

    let (dphi, dtheta) = if deriv_order >= 1 {
        (Some(derive(&phi, 1.0)), Some(derive(&theta, 1.0)))
    } else {
        (None, None)
    };
    let (d2phi, d2theta) = if deriv_order >= 2 {
        (
            Some(derive(dphi.as_ref().unwrap(), 2.0)),
            Some(derive(dtheta.as_ref().unwrap(), 2.0)),
        )
    } else {
        (None, None)
    };

    SolutionTable {
        lambda,
        phi,
        theta,
        dphi,
        dtheta,
        d2phi,
        d2theta,
    }
}

/// `Δ(λ)`, `Δ'(λ)`, `Δ''(λ)`.
pub fn discriminant(p: &Potential, lambda: f64) -> DiscriminantValue {
    let t = evaluate_solutions(p, lambda, 2);
    let n = p.period();
    DiscriminantValue {
        delta: 0.5 * (t.phi[n + 1] + t.theta[n]),
        ddelta: 0.5 * (t.dphi()[n + 1] + t.dtheta()[n]),
        d2delta: 0.5 * (t.d2phi.as_ref().unwrap()[n + 1] + t.d2theta.as_ref().unwrap()[n]),
    }
}

/// Cheap `(Δ, Δ')` without allocating second-order tables.
pub fn discriminant_first(p: &Potential, lambda: f64) -> (f64, f64) {
    let t = evaluate_solutions(p, lambda, 1);
    let n = p.period();
    (t.delta(), 0.5 * (t.dphi()[n + 1] + t.dtheta()[n]))
}

/// Wronskian `{f, g}_k = a_k (f_k g_{k+1} - f_{k+1} g_k)` with `a_0 = a_N`.
pub fn wronskian(p: &Potential, f: &[f64], g: &[f64], k: usize) -> Result<f64> {
    let n = p.period();
    let len = f.len().min(g.len());
    if k > n || k + 1 >= len {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: n.min(len.saturating_sub(2)),
        });
    }
    Ok(wronskian_unchecked(p, f, g, k))
}

#[inline]
pub(crate) fn wronskian_unchecked(p: &Potential, f: &[f64], g: &[f64], k: usize) -> f64 {
    p.a(k) * (f[k] * g[k + 1] - f[k + 1] * g[k])
}

/// Coefficient-derivatives of `φ`, `ϑ`, `φ'`, `ϑ'` along one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordDerivs {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub dphi: Vec<f64>,
    pub dtheta: Vec<f64>,
}

/// `∂_{x_k}` and `∂_{b_k}` of the solution tables for every `k = 1..=N`,
/// treating all `2N` coefficients as independent.
#[derive(Debug, Clone, PartialEq)]
pub struct QGradTables {
    pub table: SolutionTable,
    /// `x[k-1]` holds `∂_{x_k}`.
    pub x: Vec<CoordDerivs>,
    /// `b[k-1]` holds `∂_{b_k}`.
    pub b: Vec<CoordDerivs>,
}

impl QGradTables {
    fn field(&self, pick: impl Fn(&CoordDerivs) -> f64) -> GradField {
        GradField {
            dx: self.x.iter().map(&pick).collect(),
            db: self.b.iter().map(&pick).collect(),
        }
    }

    /// `∂_q Δ(λ)`.
    pub fn delta(&self) -> GradField {
        let n = self.table.period();
        self.field(|c| 0.5 * (c.phi[n + 1] + c.theta[n]))
    }

    /// `∂_q Δ'(λ)`.
    pub fn ddelta(&self) -> GradField {
        let n = self.table.period();
        self.field(|c| 0.5 * (c.dphi[n + 1] + c.dtheta[n]))
    }

    /// `∂_q φ_j(λ)`.
    pub fn phi_at(&self, j: usize) -> GradField {
        self.field(|c| c.phi[j])
    }

    /// `∂_q ϑ_j(λ)`.
    pub fn theta_at(&self, j: usize) -> GradField {
        self.field(|c| c.theta[j])
    }
}

#[derive(Clone, Copy)]
enum Coord {
    X(usize),
    B(usize),
}

/// Source term of the differentiated recursion at step `j` for solution `y`.
///
/// For `x_k` the coefficient `a_k` appears at step `j = k` (multiplying
/// `y_{k+1}`) and at step `j = k + 1` (multiplying `y_k`); for `k = N` the
/// second occurrence wraps to `j = 1` through `a_0 = a_N`.
#[inline]
fn coord_source(p: &Potential, coord: Coord, j: usize, y: &[f64]) -> f64 {
    let n = p.period();
    match coord {
        Coord::B(k) => {
            if j == k {
                -y[j]
            } else {
                0.0
            }
        }
        Coord::X(k) => {
            let mut s = 0.0;
            if j == k {
                s -= p.a(j) * y[j + 1];
            }
            let prev = if j == 1 { n } else { j - 1 };
            if prev == k {
                s -= p.a(j - 1) * y[j - 1];
            }
            s
        }
    }
}

fn coord_derivs(p: &Potential, t: &SolutionTable, coord: Coord) -> CoordDerivs {
    let n = p.period();
    let lambda = t.lambda;
    // the x-source references y_{j+1} at step j, which is already final in
    // the base table, so a single forward pass suffices
    let solve = |y: &[f64], dy: &[f64]| {
        let mut d = vec![0.0; n + 2];
        recur(p, lambda, &mut d, |j| coord_source(p, coord, j, y));
        let mut dd = vec![0.0; n + 2];
        recur(p, lambda, &mut dd, |j| d[j] + coord_source(p, coord, j, dy));
        (d, dd)
    };
    let (phi, dphi) = solve(&t.phi, t.dphi());
    let (theta, dtheta) = solve(&t.theta, t.dtheta());
    CoordDerivs {
        phi,
        theta,
        dphi,
        dtheta,
    }
}

/// Forward-mode derivatives of the solution tables in every coefficient.
pub fn q_gradient_solutions(p: &Potential, lambda: f64) -> QGradTables {
    let n = p.period();
    let table = evaluate_solutions(p, lambda, 1);
    let x = (1..=n).map(|k| coord_derivs(p, &table, Coord::X(k))).collect();
    let b = (1..=n).map(|k| coord_derivs(p, &table, Coord::B(k))).collect();
    QGradTables { table, x, b }
}

/// Taylor coefficients `c_0..=c_N` of `h ↦ Δ(λ0 + h)`.
///
/// Used to form differences `Δ(λ0 + h) - Δ(λ0)` without cancellation.
pub fn shifted_discriminant(p: &Potential, lambda0: f64) -> Vec<f64> {
    let n = p.period();
    let run = |y0: f64, y1: f64| {
        let mut y: Vec<Vec<f64>> = vec![vec![0.0; n + 1]; n + 2];
        y[0][0] = y0;
        y[1][0] = y1;
        for j in 1..=n {
            let (shift, a_prev, a_j) = (lambda0 - p.b(j), p.a(j - 1), p.a(j));
            let mut next = vec![0.0; n + 1];
            for d in 0..=n {
                let mut v = shift * y[j][d] - a_prev * y[j - 1][d];
                if d > 0 {
                    v += y[j][d - 1];
                }
                next[d] = v / a_j;
            }
            y[j + 1] = next;
        }
        y
    };
    let phi = run(0.0, 1.0);
    let theta = run(1.0, 0.0);
    (0..=n).map(|d| 0.5 * (phi[n + 1][d] + theta[n][d])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(x: &[f64], b: &[f64]) -> Potential {
        Potential::new(x.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn hand_table_n2() {
        let p = pot(&[0.0, 0.0], &[1.0, -1.0]);
        let t = evaluate_solutions(&p, 0.0, 0);
        assert_eq!(t.phi, vec![0.0, 1.0, -1.0, -2.0]);
        // ϑ_3 = -(λ + 1) = -1
        assert_eq!(t.theta, vec![1.0, 0.0, -1.0, -1.0]);
        assert_eq!(t.phi[3] * t.theta[2] - t.phi[2] * t.theta[3], 1.0);
    }

    #[test]
    fn discriminant_examples() {
        let p = pot(&[0.0, 0.0], &[1.0, -1.0]);
        let d = discriminant(&p, 0.0);
        assert_eq!((d.delta, d.ddelta, d.d2delta), (-1.5, 0.0, 1.0));

        let z = Potential::zero(2).unwrap();
        assert_eq!(discriminant(&z, 0.0).delta, -1.0);
        for n in 2..9 {
            let z = Potential::zero(n).unwrap();
            assert!((discriminant(&z, 2.0).delta - 1.0).abs() < 1e-12);
        }

        let p = pot(&[0.3, -0.3], &[0.0, 0.0]);
        assert!((discriminant(&p, 0.0).delta + 0.6f64.cosh()).abs() < 1e-15);
        assert!((discriminant(&p, 0.0).delta + 1.185465).abs() < 1e-6);
    }

    #[test]
    fn discriminant_is_chebyshev_for_zero_potential() {
        for n in 2..10 {
            let z = Potential::zero(n).unwrap();
            for i in 0..17 {
                let theta = std::f64::consts::PI * i as f64 / 16.0;
                let lambda = 2.0 * theta.cos();
                let expected = (n as f64 * theta).cos();
                assert!((discriminant(&z, lambda).delta - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wronskian_examples() {
        let p = pot(&[0.0, 0.0], &[1.0, -1.0]);
        let t = evaluate_solutions(&p, 0.0, 0);
        assert_eq!(wronskian(&p, &t.phi, &t.phi, 1).unwrap(), 0.0);
        assert_eq!(wronskian(&p, &t.theta, &t.phi, 0).unwrap(), p.a(2));
        assert_eq!(wronskian(&p, &t.theta, &t.phi, 1).unwrap(), 1.0);
        assert!(matches!(
            wronskian(&p, &t.theta, &t.phi, 3),
            Err(Error::IndexOutOfRange { .. })
        ));

        let p = Potential::random(5, 1.0, 3).unwrap();
        let t = evaluate_solutions(&p, 0.7, 0);
        assert_eq!(wronskian(&p, &t.theta, &t.phi, 0).unwrap(), p.a(5));
    }

    #[test]
    fn b_derivatives_vanish_at_initial_indices() {
        let p = Potential::random(4, 1.0, 8).unwrap();
        let g = q_gradient_solutions(&p, 0.3);
        for c in g.x.iter().chain(g.b.iter()) {
            assert_eq!(&c.phi[..2], &[0.0, 0.0]);
            assert_eq!(&c.theta[..2], &[0.0, 0.0]);
        }
    }

    #[test]
    fn wrap_term_at_k_equals_n() {
        // ϑ_2 = -a_0 ϑ_0 / a_1 = -a_N / a_1, so ∂_{x_N} ϑ_2 = -a_N / a_1 = ϑ_2
        let p = Potential::random(4, 0.8, 5).unwrap();
        let g = q_gradient_solutions(&p, -0.4);
        let theta2 = g.table.theta[2];
        assert!((g.x[3].theta[2] - theta2).abs() < 1e-15);
        assert!((g.x[0].theta[2] + theta2).abs() < 1e-15);
        for k in 1..3 {
            assert_eq!(g.x[k].theta[2], 0.0);
        }
    }

    #[test]
    fn shifted_discriminant_matches_direct() {
        let p = Potential::random(6, 1.0, 4).unwrap();
        let c = shifted_discriminant(&p, 0.3);
        for &h in &[-0.5, -0.1, 0.0, 0.2, 0.9] {
            let poly: f64 = c.iter().rev().fold(0.0, |acc, &ck| acc * h + ck);
            let direct = discriminant(&p, 0.3 + h).delta;
            assert!((poly - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        }
        let d = discriminant(&p, 0.3);
        assert!((c[1] - d.ddelta).abs() < 1e-12 * (1.0 + d.ddelta.abs()));
        assert!((2.0 * c[2] - d.d2delta).abs() < 1e-11 * (1.0 + d.d2delta.abs()));
    }
}
