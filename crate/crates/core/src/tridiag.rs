//! Dense cyclic Jacobi eigensolver for symmetric tridiagonal matrices with an
//! optional corner coupling (periodic / antiperiodic boundary).

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Symmetric tridiagonal matrix, plus `corner` added to entries `(0, n-1)`
/// and `(n-1, 0)`. For `n = 2` the corner lands on the off-diagonal entry
/// itself, which is what the periodic two-site operator needs.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSpec {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub corner: f64,
}

impl TridiagonalSpec {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if off.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: off.len(),
            });
        }
        if off.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidArgument("off-diagonal entries must be positive".into()));
        }
        if n == 1 && corner != 0.0 {
            return Err(Error::InvalidArgument("corner coupling needs size >= 2".into()));
        }
        Ok(Self { diag, off, corner })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
        }
        for (i, &e) in self.off.iter().enumerate() {
            m[i][i + 1] = e;
            m[i + 1][i] = e;
        }
        if n >= 2 {
            m[0][n - 1] += self.corner;
            m[n - 1][0] += self.corner;
        }
        m
    }
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn off_norm(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i][j] * m[i][j];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi sweeps.
/// Returns `(values, vectors)` with `vectors[k]` the k-th eigenvector,
/// sorted by ascending value.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let norm = frobenius(&a);
    let target = f64::EPSILON * norm;

    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| v.iter().map(|row| row[i]).collect())
        .collect();
    Ok((values, vectors))
}

/// All eigenvalues of `t`, ascending, each verified by an eigenvector
/// residual `‖Mv - λv‖ <= 1e-10 ‖M‖`.
pub fn symmetric_eigenvalues(t: &TridiagonalSpec) -> Result<Vec<f64>> {
    let m = t.dense();
    let (values, vectors) = jacobi_eigen(&m)?;
    let norm = frobenius(&m).max(f64::MIN_POSITIVE);
    for (lambda, v) in values.iter().zip(&vectors) {
        let residual = m
            .iter()
            .zip(v)
            .map(|(row, vi)| {
                let mv: f64 = row.iter().zip(v).map(|(mij, vj)| mij * vj).sum();
                (mv - lambda * vi).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        if residual > 1e-10 * norm {
            return Err(Error::ResidualTooLarge {
                what: "eigenpair",
                residual,
                tol: 1e-10 * norm,
            });
        }
    }
    Ok(values)
}
