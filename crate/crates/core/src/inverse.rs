//! Recovering `q` from MO data by Newton continuation.
//!
//! The target is approached along `s ↦ s·ψ*`, `s: 0 → 1`, starting from the
//! zero potential (whose MO vector is zero). Each leg is a damped Newton
//! iteration in the free chart with the analytic Jacobian. A failed leg
//! halves the continuation step; below the smallest step the solver gives
//! up and reports the path it managed to follow.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gradients::mo_jacobian;
use crate::mo_map::mo_map;
use crate::potential::{FreeCoords, Potential};

#[derive(Debug, Clone, PartialEq)]
pub struct InverseOptions {
    /// Target for `‖ψ(q) - ψ*‖_∞`.
    pub tol: f64,
    /// Newton iterations per continuation leg.
    pub max_newton: usize,
    /// Initial number of continuation legs.
    pub homotopy_steps: usize,
    /// The leg count may double on failure up to this many.
    pub max_homotopy_steps: usize,
    /// Smallest damping factor tried by the backtracking line search.
    pub min_damping: f64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_newton: 50,
            homotopy_steps: 8,
            max_homotopy_steps: 256,
            min_damping: 2f64.powi(-30),
        }
    }
}

impl InverseOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_newton == 0 {
            return Err(Error::InvalidArgument("max_newton must be >= 1".into()));
        }
        if self.homotopy_steps == 0 || self.homotopy_steps > self.max_homotopy_steps {
            return Err(Error::InvalidArgument(format!(
                "homotopy_steps must be in 1..={}",
                self.max_homotopy_steps
            )));
        }
        if !(self.min_damping > 0.0 && self.min_damping <= 1.0) {
            return Err(Error::InvalidArgument("min_damping must be in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Continuation parameter and the residual reached there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub s: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseResult {
    pub q: Potential,
    pub residual: f64,
    pub newton_iterations: usize,
    pub homotopy_path: Vec<PathPoint>,
}

fn sup_norm(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, e| m.max(e.abs()))
}

/// `ψ(embed(u)) - target`, with any failure of the forward map reported as
/// `None` so a line search can treat it as an infinite residual.
fn defect(u: &FreeCoords, n: usize, target: &[f64]) -> Option<Vec<f64>> {
    let p = Potential::embed(u, n).ok()?;
    let psi = mo_map(&p).ok()?;
    Some(psi.iter().zip(target).map(|(a, b)| a - b).collect())
}

struct Leg {
    u: FreeCoords,
    residual: f64,
    iterations: usize,
}

/// Damped Newton from `u` towards `target`. `Err` carries the best residual.
fn newton_leg(target: &[f64], u: FreeCoords, n: usize, opts: &InverseOptions) -> std::result::Result<Leg, f64> {
    let mut u = u;
    let mut f = defect(&u, n, target).ok_or(f64::INFINITY)?;
    let mut r = sup_norm(f.iter().copied());
    for it in 0..opts.max_newton {
        if r <= opts.tol {
            return Ok(Leg {
                u,
                residual: r,
                iterations: it,
            });
        }
        let p = Potential::embed(&u, n).map_err(|_| r)?;
        let jac = mo_jacobian(&p).map_err(|_| r)?;
        let rhs = -DVector::from_column_slice(&f);
        let step = jac.matrix.lu().solve(&rhs).ok_or(r)?;

        let mut t = 1.0;
        loop {
            let trial = FreeCoords(u.0.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect());
            if let Some(ft) = defect(&trial, n, target) {
                let rt = sup_norm(ft.iter().copied());
                if rt < r {
                    u = trial;
                    f = ft;
                    r = rt;
                    break;
                }
            }
            t *= 0.5;
            if t < opts.min_damping {
                return Err(r);
            }
        }
    }
    if r <= opts.tol {
        Ok(Leg {
            u,
            residual: r,
            iterations: opts.max_newton,
        })
    } else {
        Err(r)
    }
}

fn check_target(target: &[f64], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::PeriodTooSmall(n));
    }
    if target.len() != 2 * n - 2 {
        return Err(Error::DimensionMismatch {
            expected: 2 * n - 2,
            got: target.len(),
        });
    }
    if target.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("target has non-finite entries".into()));
    }
    Ok(())
}

/// Solves `ψ(q) = target` for a period-`n` potential.
pub fn solve_inverse(target: &[f64], n: usize, opts: &InverseOptions) -> Result<InverseResult> {
    check_target(target, n)?;
    opts.validate()?;

    let mut u = Potential::zero(n)?.project();
    let r0 = sup_norm(target.iter().copied());
    let mut path = vec![PathPoint { s: 0.0, residual: 0.0 }];
    if r0 <= opts.tol {
        return Ok(InverseResult {
            q: Potential::zero(n)?,
            residual: r0,
            newton_iterations: 0,
            homotopy_path: path,
        });
    }

    let min_ds = 1.0 / opts.max_homotopy_steps as f64;
    let mut ds = 1.0 / opts.homotopy_steps as f64;
    let mut s = 0.0;
    let mut iterations = 0;
    let mut residual = 0.0;
    while s < 1.0 {
        let s_next = (s + ds).min(1.0);
        let leg_target: Vec<f64> = target.iter().map(|t| s_next * t).collect();
        match newton_leg(&leg_target, u.clone(), n, opts) {
            Ok(leg) => {
                u = leg.u;
                s = s_next;
                residual = leg.residual;
                iterations += leg.iterations;
                path.push(PathPoint { s, residual });
            }
            Err(best) => {
                ds *= 0.5;
                if ds < min_ds {
                    return Err(Error::HomotopyStalled {
                        s,
                        residual: best,
                        path,
                    });
                }
            }
        }
    }
    Ok(InverseResult {
        q: Potential::embed(&u, n)?,
        residual,
        newton_iterations: iterations,
        homotopy_path: path,
    })
}

/// A single damped Newton solve from `q0`, without continuation.
pub fn newton_solve(target: &[f64], q0: &Potential, opts: &InverseOptions) -> Result<InverseResult> {
    let n = q0.period();
    check_target(target, n)?;
    opts.validate()?;
    match newton_leg(target, q0.project(), n, opts) {
        Ok(leg) => Ok(InverseResult {
            q: Potential::embed(&leg.u, n)?,
            residual: leg.residual,
            newton_iterations: leg.iterations,
            homotopy_path: vec![PathPoint {
                s: 1.0,
                residual: leg.residual,
            }],
        }),
        Err(best) => Err(Error::HomotopyStalled {
            s: 0.0,
            residual: best,
            path: Vec::new(),
        }),
    }
}

/// `‖p - solve_inverse(ψ(p))‖_∞` in free coordinates.
pub fn roundtrip_check(p: &Potential, opts: &InverseOptions) -> Result<f64> {
    let psi = mo_map(p)?;
    let q = solve_inverse(&psi, p.period(), opts)?.q;
    Ok(p.distance(&q))
}
