use thiserror::Error;

use crate::inverse::PathPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sum of {which} is {sum:e}, expected 0 (tolerance {tol:e})")]
    SumNotZero {
        which: &'static str,
        sum: f64,
        tol: f64,
    },

    #[error("period N = {0} is too small, need N >= 2")]
    PeriodTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("band edge ordering violated at position {position}: {detail}")]
    OrderingViolation { position: usize, detail: String },

    #[error("{what}: residual {residual:e} exceeds {tol:e}")]
    ResidualTooLarge {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("no sign change of the discriminant derivative on gap {gap}")]
    BracketFailure { gap: usize },

    #[error("norming constant for gap {gap}: log argument {value:e} is not positive")]
    NonPositiveArgument { gap: usize, value: f64 },

    #[error("slit height for gap {gap}: cosh argument {value} is below 1")]
    BelowOne { gap: usize, value: f64 },

    #[error("gap {gap}: negative radicand {value:e} for psi_2")]
    NegativeRadicand { gap: usize, value: f64 },

    #[error("degenerate denominator {value:e} in gradient of gap {gap}")]
    DegenerateDenominator { gap: usize, value: f64 },

    #[error("second derivative of the discriminant vanishes at critical point {gap} ({value:e})")]
    VanishingSecondDerivative { gap: usize, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("Jacobian is singular: smallest singular value {sigma_min:e}, norm {norm:e}")]
    SingularJacobian { sigma_min: f64, norm: f64 },

    #[error("homotopy stalled at s = {s} (residual {residual:e}) after {} legs", path.len())]
    HomotopyStalled {
        s: f64,
        residual: f64,
        path: Vec<PathPoint>,
    },

    #[error("quasimomentum branch inconsistency on band {band}: {detail}")]
    BranchInconsistency { band: usize, detail: String },
}
