//! Points of the sum-zero coefficient space and the free-coordinate chart.
//!
//! A potential is the pair `q = (x, b)` of real N-periodic sequences with
//! `Σ x_n = Σ b_n = 0`. The off-diagonal of the Jacobi matrix is
//! `a_n = exp(x_n)`, so positivity of `a` never has to be checked.
//!
//! Sequences are stored 0-based (`x[0]` is `x_1`); the accessors [`Potential::a`]
//! and [`Potential::b`] take the 1-based index used throughout the crate and
//! apply the cyclic identification `a_0 = a_N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Relative tolerance on the sum-zero constraint, multiplied by `N`.
pub const SUM_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    x: Vec<f64>,
    b: Vec<f64>,
    a: Vec<f64>,
}

/// Free coordinates `u ∈ R^{2N-2}`: `x_1..x_{N-1}` followed by `b_1..b_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeCoords(pub Vec<f64>);

impl FreeCoords {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Potential {
    /// Builds and validates a potential.
    pub fn new(x: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if x.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: b.len(),
            });
        }
        let a = x.iter().map(|v| v.exp()).collect();
        let p = Potential { x, b, a };
        p.validate()?;
        Ok(p)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Checks `N >= 2` and both sum-zero constraints.
    pub fn validate(&self) -> Result<()> {
        let n = self.x.len();
        if n < 2 {
            return Err(Error::PeriodTooSmall(n));
        }
        let tol = SUM_ZERO_TOL * n as f64;
        for (which, seq) in [("x", &self.x), ("b", &self.b)] {
            if seq.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{which} has non-finite entries")));
            }
            let sum: f64 = seq.iter().sum();
            if sum.abs() > tol {
                return Err(Error::SumNotZero { which, sum, tol });
            }
        }
        Ok(())
    }

    /// Period `N`.
    pub fn period(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn b_seq(&self) -> &[f64] {
        &self.b
    }

    pub fn a_seq(&self) -> &[f64] {
        &self.a
    }

    /// `a_j` for `j` in `0..=N`, with `a_0 = a_N`.
    #[inline]
    pub fn a(&self, j: usize) -> f64 {
        let n = self.period();
        if j == 0 {
            self.a[n - 1]
        } else {
            self.a[j - 1]
        }
    }

    /// `b_j` for `j` in `1..=N`.
    #[inline]
    pub fn b(&self, j: usize) -> f64 {
        self.b[j - 1]
    }

    /// Drops the dependent coordinates `x_N` and `b_N`.
    pub fn project(&self) -> FreeCoords {
        let n = self.period();
        let mut u = Vec::with_capacity(2 * n - 2);
        u.extend_from_slice(&self.x[..n - 1]);
        u.extend_from_slice(&self.b[..n - 1]);
        FreeCoords(u)
    }

    /// Inverse of [`Potential::project`]: the last entry of each sequence is
    /// minus the sum of the others.
    pub fn embed(u: &FreeCoords, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::PeriodTooSmall(n));
        }
        if u.len() != 2 * n - 2 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n - 2,
                got: u.len(),
            });
        }
        let complete = |free: &[f64]| {
            let mut v = free.to_vec();
            v.push(-free.iter().sum::<f64>());
            v
        };
        let x = complete(&u.0[..n - 1]);
        let b = complete(&u.0[n - 1..]);
        Self::new(x, b)
    }

    /// Deterministic random potential: entries uniform in `[-scale, scale]`,
    /// mean-subtracted, with the last entry then fixed by the chart so that
    /// `embed(project(p)) == p` holds bit for bit.
    pub fn random(n: usize, scale: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::PeriodTooSmall(n));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be >= 0, got {scale}")));
        }
        if scale == 0.0 {
            return Self::zero(n);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-scale..=scale)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            v.iter_mut().for_each(|e| *e -= mean);
            v[n - 1] = -v[..n - 1].iter().sum::<f64>();
            v
        };
        let x = draw();
        let b = draw();
        Self::new(x, b)
    }

    /// Sup-norm distance in free coordinates.
    pub fn distance(&self, other: &Potential) -> f64 {
        self.project()
            .0
            .iter()
            .zip(other.project().0.iter())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }
}

/// Free-function form of [`Potential::validate`].
pub fn validate(p: &Potential) -> Result<()> {
    p.validate()
}

pub fn embed(u: &FreeCoords, n: usize) -> Result<Potential> {
    Potential::embed(u, n)
}

pub fn project(p: &Potential) -> FreeCoords {
    p.project()
}

pub fn random_potential(n: usize, scale: f64, seed: u64) -> Result<Potential> {
    Potential::random(n, scale, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(Potential::new(vec![0.0, 0.0], vec![1.0, -1.0]).is_ok());
        assert!(Potential::new(vec![0.3, -0.3], vec![0.0, 0.0]).is_ok());
        let err = Potential::new(vec![0.0; 3], vec![1.0; 3]).unwrap_err();
        assert!(matches!(err, Error::SumNotZero { which: "b", .. }));
        assert_eq!(
            Potential::new(vec![0.0], vec![0.0]).unwrap_err(),
            Error::PeriodTooSmall(1)
        );
    }

    #[test]
    fn embed_examples() {
        let p = Potential::embed(&FreeCoords(vec![0.3, 0.0]), 2).unwrap();
        assert_eq!(p.x(), &[0.3, -0.3]);
        assert_eq!(p.b_seq(), &[0.0, 0.0]);

        let p = Potential::embed(&FreeCoords(vec![0.0, 1.0]), 2).unwrap();
        assert_eq!(p.x(), &[0.0, 0.0]);
        assert_eq!(p.b_seq(), &[1.0, -1.0]);

        let p = Potential::embed(&FreeCoords(vec![0.0; 4]), 3).unwrap();
        assert_eq!(p, Potential::zero(3).unwrap());

        let err = Potential::embed(&FreeCoords(vec![0.0; 3]), 3).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, got: 3 });
    }

    #[test]
    fn project_examples() {
        let p = Potential::new(vec![0.3, -0.3], vec![0.0, 0.0]).unwrap();
        assert_eq!(p.project().0, vec![0.3, 0.0]);
        assert_eq!(Potential::zero(4).unwrap().project().0, vec![0.0; 6]);
        let p = Potential::new(vec![1.0, -2.0, 1.0], vec![0.5, 0.0, -0.5]).unwrap();
        assert_eq!(p.project().0, vec![1.0, -2.0, 0.5, 0.0]);
    }

    #[test]
    fn random_examples() {
        assert_eq!(Potential::random(5, 0.0, 7).unwrap(), Potential::zero(5).unwrap());
        let p1 = Potential::random(4, 1.0, 1).unwrap();
        let p2 = Potential::random(4, 1.0, 1).unwrap();
        assert_eq!(p1, p2);
        assert!(p1.x().iter().sum::<f64>().abs() < 1e-15);
        assert!(p1.b_seq().iter().sum::<f64>().abs() < 1e-15);
        assert_ne!(p1, Potential::random(4, 1.0, 2).unwrap());
        assert_eq!(Potential::random(1, 1.0, 1).unwrap_err(), Error::PeriodTooSmall(1));
    }

    #[test]
    fn cyclic_accessor() {
        let p = Potential::new(vec![0.1, 0.2, -0.3], vec![0.0; 3]).unwrap();
        assert_eq!(p.a(0), p.a(3));
        assert_eq!(p.a(1), 0.1f64.exp());
        let prod: f64 = p.a_seq().iter().product();
        assert!((prod - 1.0).abs() < 1e-12);
    }
}
