//! Reference computations for the integration tests, written independently
//! of the library internals: transfer matrices for `Δ`, nalgebra for
//! eigenvalues, and plain central differences.

#![allow(dead_code)]

use nalgebra::DMatrix;
use periodic_jacobi::{FreeCoords, Potential};

/// `Δ(λ) = ½ tr(T_N ⋯ T_1)` with `T_j = [[(λ-b_j)/a_j, -a_{j-1}/a_j], [1, 0]]`.
pub fn transfer_discriminant(p: &Potential, lambda: f64) -> f64 {
    let m = monodromy(p, lambda);
    0.5 * (m[0][0] + m[1][1])
}

/// `[[φ_{N+1}, ϑ_{N+1}], [φ_N, ϑ_N]]` as a transfer product.
pub fn monodromy(p: &Potential, lambda: f64) -> [[f64; 2]; 2] {
    let n = p.period();
    let (a, b) = (p.a_seq(), p.b_seq());
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for j in 0..n {
        let prev = a[(j + n - 1) % n];
        let t = [[(lambda - b[j]) / a[j], -prev / a[j]], [1.0, 0.0]];
        m = [
            [
                t[0][0] * m[0][0] + t[0][1] * m[1][0],
                t[0][0] * m[0][1] + t[0][1] * m[1][1],
            ],
            [m[0][0], m[0][1]],
        ];
    }
    m
}

/// `log(s φ_{N+1}(ν))` at a Dirichlet point, read off whichever of
/// `φ_{N+1}` and `ϑ_N = 1/φ_{N+1}` is larger in magnitude.
pub fn reference_norming(p: &Potential, nu: f64, sign: f64) -> f64 {
    let m = monodromy(p, nu);
    if m[0][0].abs() >= m[1][1].abs() {
        (sign * m[0][0]).ln()
    } else {
        -(sign * m[1][1]).ln()
    }
}

/// `φ_{N+1}(λ)` by the same transfer product.
pub fn transfer_phi_end(p: &Potential, lambda: f64) -> f64 {
    let n = p.period();
    let (a, b) = (p.a_seq(), p.b_seq());
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..n {
        let next = ((lambda - b[j]) * cur - a[(j + n - 1) % n] * prev) / a[j];
        prev = cur;
        cur = next;
    }
    cur
}

fn eigen(n: usize, f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let m = DMatrix::from_fn(n, n, f);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Band edges from nalgebra's eigensolver on the (anti)periodic matrices.
pub fn reference_edges(p: &Potential) -> Vec<f64> {
    let n = p.period();
    let (a, b) = (p.a_seq(), p.b_seq());
    let mut all = Vec::new();
    for sign in [1.0, -1.0] {
        all.extend(eigen(n, |i, j| {
            let mut v = 0.0;
            if i == j {
                v += b[i];
            }
            if j == i + 1 || i == j + 1 {
                v += a[i.min(j)];
            }
            if (i == 0 && j == n - 1) || (j == 0 && i == n - 1) {
                v += sign * a[n - 1];
            }
            v
        }));
    }
    all.sort_by(f64::total_cmp);
    all
}

/// Dirichlet eigenvalues from nalgebra.
pub fn reference_dirichlet(p: &Potential) -> Vec<f64> {
    let n = p.period();
    let (a, b) = (p.a_seq(), p.b_seq());
    eigen(n - 1, |i, j| {
        if i == j {
            b[i]
        } else if i.abs_diff(j) == 1 {
            a[i.min(j)]
        } else {
            0.0
        }
    })
}

/// Central-difference gradient in free coordinates.
pub fn fd_gradient(f: impl Fn(&Potential) -> f64, p: &Potential, h: f64) -> Vec<f64> {
    fd_jacobian(|q| vec![f(q)], p, h).remove(0)
}

/// Central-difference Jacobian of a vector-valued map, one row per output.
pub fn fd_jacobian(f: impl Fn(&Potential) -> Vec<f64>, p: &Potential, h: f64) -> Vec<Vec<f64>> {
    let n = p.period();
    let u = p.project();
    let columns: Vec<Vec<f64>> = (0..u.len())
        .map(|j| {
            let mut plus = u.0.clone();
            let mut minus = u.0.clone();
            plus[j] += h;
            minus[j] -= h;
            let fp = f(&Potential::embed(&FreeCoords(plus), n).unwrap());
            let fm = f(&Potential::embed(&FreeCoords(minus), n).unwrap());
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    (0..rows).map(|i| columns.iter().map(|c| c[i]).collect()).collect()
}

/// `‖a - b‖_∞ / max(‖b‖_∞, floor)`.
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let s = b.iter().fold(floor, |m, v| m.max(v.abs()));
    d / s
}
