//! The Marchenko-Ostrovsky map `q ↦ ψ = (ψ_{1,n}, ψ_{2,n})_{n=1..N-1}`.
//!
//! * `ψ_{1,n} = log((-1)^{N-n} φ_{N+1}(ν_n))` is the norming constant,
//! * `|ψ_n| = arcosh((-1)^{N-n} Δ(λ_n))` is the slit height,
//! * `ψ_{2,n} = sign(λ_n - ν_n) (|ψ_n|² - ψ_{1,n}²)^{1/2}`.
//!
//! The packed vector is interleaved: `(ψ_{1,1}, ψ_{2,1}, ψ_{1,2}, ψ_{2,2}, ...)`.
//!
//! `|ψ_n|² - ψ_{1,n}²` vanishes to second order when `λ_n = ν_n`, so it is
//! never formed as a difference of squares. Instead
//! `D = (-1)^{N-n}(Δ(λ_n) - Δ(ν_n)) = cosh|ψ_n| - cosh ψ_{1,n}` is evaluated
//! from the Taylor expansion of `Δ` about `λ_n`, and `|ψ_n| - |ψ_{1,n}|` is
//! recovered from `D` through a cancellation-free `log1p` form.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::recurrence::{dirichlet_solutions, discriminant_first, shifted_discriminant};
use crate::spectrum::{gap_sign, spectral_data, SpectralData};

/// Arguments of `log`/`arcosh` within this distance below 1 are clamped.
pub const ARCOSH_CLAMP: f64 = 1e-9;
/// Negative radicands down to `-RADICAND_CLAMP` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-10;
/// `|λ_n - ν_n|` below this (times the spectral scale) counts as zero.
pub const SIGN_SNAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MOData {
    pub psi1: Vec<f64>,
    pub psi2: Vec<f64>,
    /// `|ψ_n|`.
    pub height: Vec<f64>,
    /// `ξ_n = |ψ_n|²`.
    pub xi: Vec<f64>,
}

impl MOData {
    /// Interleaved packing `(ψ_{1,1}, ψ_{2,1}, ψ_{1,2}, ...)`.
    pub fn to_vector(&self) -> Vec<f64> {
        self.psi1
            .iter()
            .zip(&self.psi2)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }
}

/// Splits an interleaved vector into `(ψ_1, ψ_2)`.
pub fn unpack(psi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let psi1 = psi.iter().step_by(2).copied().collect();
    let psi2 = psi.iter().skip(1).step_by(2).copied().collect();
    (psi1, psi2)
}

/// `ψ_{1,n} = log((-1)^{N-n} φ_{N+1}(ν_n))`.
///
/// At a Dirichlet point `φ_{N+1} ϑ_N = 1`, so the same value is
/// `-log((-1)^{N-n} ϑ_N(ν_n))`. Whichever factor is larger in magnitude is
/// used: the small one is dominated by the rounding of `ν_n`.
pub fn norming_constant(p: &Potential, nu_n: f64, n: usize) -> Result<f64> {
    let period = p.period();
    check_gap_index(period, n)?;
    let t = dirichlet_solutions(p, nu_n);
    let sign = gap_sign(period, n);
    let value = sign * t.phi[period + 1];
    if !(value > 0.0) {
        return Err(Error::NonPositiveArgument { gap: n, value });
    }
    let dual = sign * t.theta[period];
    if value < 1.0 && dual > 1.0 {
        return Ok(-dual.ln());
    }
    Ok(value.ln())
}

/// `|ψ_n| = arcosh((-1)^{N-n} Δ(λ_n))`.
pub fn slit_height(p: &Potential, lambda_n: f64, n: usize) -> Result<f64> {
    let period = p.period();
    check_gap_index(period, n)?;
    let value = gap_sign(period, n) * discriminant_first(p, lambda_n).0;
    if value < 1.0 - ARCOSH_CLAMP {
        return Err(Error::BelowOne { gap: n, value });
    }
    Ok(value.max(1.0).acosh())
}

fn check_gap_index(period: usize, n: usize) -> Result<()> {
    if n == 0 || n >= period {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: period - 1,
        });
    }
    Ok(())
}

/// `(-1)^{N-n}(Δ(λ_n) - Δ(λ_n + h))` from the Taylor coefficients at `λ_n`.
fn cosh_gap(p: &Potential, n: usize, lambda_n: f64, h: f64) -> f64 {
    let c = shifted_discriminant(p, lambda_n);
    let tail = c[1..].iter().rev().fold(0.0, |acc, &ck| (acc + ck) * h);
    -gap_sign(p.period(), n) * tail
}

/// `ψ_n` for one open gap: `(ψ_1, ψ_2, |ψ_n|)`.
fn gap_components(
    p: &Potential,
    spec: &SpectralData,
    n: usize,
) -> Result<(f64, f64, f64)> {
    let nu = spec.nu[n - 1];
    let lambda = spec.crit[n - 1];
    let psi1 = norming_constant(p, nu, n)?;

    let d = cosh_gap(p, n, lambda, nu - lambda);
    let c0 = psi1.cosh();
    let s0 = psi1.abs().sinh();
    let sinh_a = (s0 * s0 + d * (2.0 * c0 + d)).max(0.0).sqrt();
    let denom = sinh_a + s0;
    let excess = if denom > 0.0 {
        (d + d * (2.0 * c0 + d) / denom) / (c0 + s0)
    } else {
        d
    };
    // |ψ_n| - |ψ_1|
    let gap = excess.ln_1p();
    let gap = if gap.is_nan() { -1.0 } else { gap };
    let mut radicand = gap * (gap + 2.0 * psi1.abs());
    if radicand < 0.0 {
        if radicand >= -RADICAND_CLAMP {
            radicand = 0.0;
        } else {
            return Err(Error::NegativeRadicand {
                gap: n,
                value: radicand,
            });
        }
    }
    let diff = lambda - nu;
    let sign = if diff.abs() <= SIGN_SNAP * spec.spectral_scale() {
        0.0
    } else {
        diff.signum()
    };
    let height = psi1.abs() + gap.max(0.0);
    Ok((psi1, sign * radicand.sqrt(), height))
}

/// MO data for precomputed spectral landmarks.
pub fn mo_data_from(p: &Potential, spec: &SpectralData) -> Result<MOData> {
    let period = p.period();
    let mut out = MOData {
        psi1: vec![0.0; period - 1],
        psi2: vec![0.0; period - 1],
        height: vec![0.0; period - 1],
        xi: vec![0.0; period - 1],
    };
    for n in 1..period {
        if spec.gap_closed[n - 1] {
            continue;
        }
        let (psi1, psi2, height) = gap_components(p, spec, n)?;
        out.psi1[n - 1] = psi1;
        out.psi2[n - 1] = psi2;
        out.height[n - 1] = height;
        out.xi[n - 1] = height * height;
    }
    Ok(out)
}

/// Spectral landmarks together with the MO data.
pub fn mo_data(p: &Potential) -> Result<(SpectralData, MOData)> {
    let spec = spectral_data(p)?;
    let mo = mo_data_from(p, &spec)?;
    Ok((spec, mo))
}

/// The packed vector `ψ(q) ∈ R^{2N-2}`.
pub fn mo_map(p: &Potential) -> Result<Vec<f64>> {
    Ok(mo_data(p)?.1.to_vector())
}
