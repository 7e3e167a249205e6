//! The quasimomentum `κ` with `cos κ(λ) = (-1)^N Δ(λ)` on the real axis.
//!
//! `κ` maps band `σ_n` onto `[π(n-1), πn]` and the upper side of gap `γ_n`
//! onto the vertical slit above `πn`, whose top is reached at the critical
//! point `λ_n` with height `|ψ_n|`. Only boundary values `λ + i0` are
//! computed; the lower side is the complex conjugate.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mo_map::mo_data_from;
use crate::potential::Potential;
use crate::recurrence::discriminant_first;
use crate::spectrum::{gap_sign, spectral_data, SpectralData};

/// `κ(λ + i0)` at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaSample {
    pub lambda: f64,
    pub re_kappa: f64,
    /// `im κ(λ + i0)`: zero on bands, `arcosh((-1)^{N-n}Δ)` on gap `n`.
    pub im_kappa: f64,
}

impl KappaSample {
    /// `|cos κ - (-1)^N Δ(λ)|`, with `cos(u + iv) = cos u cosh v - i sin u sinh v`.
    pub fn defining_residual(&self, p: &Potential) -> f64 {
        let target = parity(p.period()) * discriminant_first(p, self.lambda).0;
        let re = self.re_kappa.cos() * self.im_kappa.cosh() - target;
        let im = -self.re_kappa.sin() * self.im_kappa.sinh();
        re.hypot(im)
    }
}

/// `(-1)^N`.
fn parity(period: usize) -> f64 {
    if period % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `π(n-1) + arccos((-1)^{n-1}(-1)^N Δ(λ))` for `λ` in band `n`.
fn band_kappa(p: &Potential, spec: &SpectralData, n: usize, lambda: f64) -> f64 {
    let (lo, hi) = spec.band(n);
    let base = PI * (n - 1) as f64;
    if lambda == lo {
        return base;
    }
    if lambda == hi {
        return base + PI;
    }
    let orient = if n % 2 == 1 { 1.0 } else { -1.0 };
    let c = orient * parity(p.period()) * discriminant_first(p, lambda).0;
    base + c.clamp(-1.0, 1.0).acos()
}

fn gap_height(p: &Potential, n: usize, lambda: f64) -> f64 {
    let v = gap_sign(p.period(), n) * discriminant_first(p, lambda).0;
    v.max(1.0).acosh()
}

/// `κ(λ + i0)` for `λ` in `[λ_0^+, λ_N^-]`.
pub fn kappa_at(p: &Potential, spec: &SpectralData, lambda: f64) -> Result<KappaSample> {
    let period = p.period();
    let (lo, hi) = (spec.edges[0], spec.edges[2 * period - 1]);
    if !(lambda >= lo && lambda <= hi) {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} outside [{lo}, {hi}]"
        )));
    }
    for n in 1..=period {
        let (b_lo, b_hi) = spec.band(n);
        if lambda >= b_lo && lambda <= b_hi {
            return Ok(KappaSample {
                lambda,
                re_kappa: band_kappa(p, spec, n, lambda),
                im_kappa: 0.0,
            });
        }
        if n < period && lambda > b_hi && lambda < spec.upper(n) {
            return Ok(KappaSample {
                lambda,
                re_kappa: PI * n as f64,
                im_kappa: gap_height(p, n, lambda),
            });
        }
    }
    unreachable!("bands and gaps cover [λ_0^+, λ_N^-]")
}

/// Samples `κ` along the spectrum: `points_per_band` points on each band
/// (endpoints included), and as many interior points on each open gap.
pub fn kappa_on_real_axis(
    p: &Potential,
    spec: &SpectralData,
    points_per_band: usize,
) -> Result<Vec<KappaSample>> {
    if points_per_band < 2 {
        return Err(Error::InvalidArgument(format!(
            "points_per_band must be >= 2, got {points_per_band}"
        )));
    }
    let period = p.period();
    let m = points_per_band;
    let mut out = Vec::with_capacity(2 * period * m);
    for n in 1..=period {
        let (lo, hi) = spec.band(n);
        let start = out.len();
        for i in 0..m {
            let lambda = if i == m - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (m - 1) as f64
            };
            out.push(KappaSample {
                lambda,
                re_kappa: band_kappa(p, spec, n, lambda),
                im_kappa: 0.0,
            });
        }
        for (i, w) in out[start..].windows(2).enumerate() {
            if w[1].re_kappa < w[0].re_kappa {
                return Err(Error::BranchInconsistency {
                    band: n,
                    detail: format!(
                        "re κ decreases between samples {i} and {}: {} > {}",
                        i + 1,
                        w[0].re_kappa,
                        w[1].re_kappa
                    ),
                });
            }
        }
        if n < period && !spec.gap_closed[n - 1] {
            let (g_lo, g_hi) = spec.gap(n);
            for i in 1..=m {
                let lambda = g_lo + (g_hi - g_lo) * i as f64 / (m + 1) as f64;
                out.push(KappaSample {
                    lambda,
                    re_kappa: PI * n as f64,
                    im_kappa: gap_height(p, n, lambda),
                });
            }
        }
    }
    Ok(out)
}

/// The slit over gap `n` and `κ` at its two distinguished points.
#[derive(Debug, Clone, PartialEq)]
pub struct Slit {
    pub gap: usize,
    /// `πn`.
    pub center: f64,
    /// `im κ(λ_n + i0)`.
    pub height: f64,
    /// `κ(λ_n + i0)`.
    pub at_crit: KappaSample,
    /// `κ(ν_n + i0)`.
    pub at_nu: KappaSample,
}

/// Slit centers and heights read off `κ`.
pub fn slit_data(p: &Potential) -> Result<Vec<Slit>> {
    let spec = spectral_data(p)?;
    slit_data_from(p, &spec)
}

pub fn slit_data_from(p: &Potential, spec: &SpectralData) -> Result<Vec<Slit>> {
    (1..p.period())
        .map(|n| {
            let at_crit = kappa_at(p, spec, spec.crit[n - 1])?;
            let at_nu = kappa_at(p, spec, spec.nu[n - 1])?;
            Ok(Slit {
                gap: n,
                center: PI * n as f64,
                height: at_crit.im_kappa,
                at_crit,
                at_nu,
            })
        })
        .collect()
}

/// Terms of the two-sided estimate
/// `¼e^{2 max|ψ_n|} ≤ ¼(λ_N^- - λ_0^+)² ≤ Σb² + 2Σa² ≤ N(λ_N^- - λ_0^+)² ≤ 16N e^{2 max|ψ_n|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub lhs1: f64,
    pub mid: f64,
    pub quantity: f64,
    pub rhs1: f64,
    pub rhs2: f64,
    /// Right minus left side of each of the four comparisons.
    pub margins: [f64; 4],
    /// Comparisons that hold with equality, up to the slack.
    pub equalities: [bool; 4],
}

/// Relative slack of the non-strict comparisons.
pub const ESTIMATE_SLACK: f64 = 1e-9;

impl EstimateReport {
    pub fn chain(&self) -> [f64; 5] {
        [self.lhs1, self.mid, self.quantity, self.rhs1, self.rhs2]
    }

    /// Indices (0-based) of comparisons that fail beyond the slack.
    pub fn violations(&self) -> Vec<usize> {
        let c = self.chain();
        (0..4)
            .filter(|&i| self.margins[i] < -ESTIMATE_SLACK * (1.0 + c[i + 1].abs()))
            .collect()
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Evaluates each term of the estimate chain, with `Σb² + 2Σa²` as the
/// middle quantity.
pub fn verify_estimates(p: &Potential) -> Result<EstimateReport> {
    let spec = spectral_data(p)?;
    let mo = mo_data_from(p, &spec)?;
    let period = p.period() as f64;
    let top = mo.height.iter().fold(0.0f64, |m, h| m.max(*h));
    let grow = (2.0 * top).exp();
    let w = spec.width();
    let quantity = p.b_seq().iter().map(|v| v * v).sum::<f64>()
        + 2.0 * p.a_seq().iter().map(|v| v * v).sum::<f64>();
    let chain = [0.25 * grow, 0.25 * w * w, quantity, period * w * w, 16.0 * period * grow];
    let margins = [
        chain[1] - chain[0],
        chain[2] - chain[1],
        chain[3] - chain[2],
        chain[4] - chain[3],
    ];
    let mut equalities = [false; 4];
    for i in 0..4 {
        equalities[i] = margins[i].abs() <= ESTIMATE_SLACK * (1.0 + chain[i + 1].abs());
    }
    Ok(EstimateReport {
        lhs1: chain[0],
        mid: chain[1],
        quantity: chain[2],
        rhs1: chain[3],
        rhs2: chain[4],
        margins,
        equalities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(x: &[f64], b: &[f64]) -> Potential {
        Potential::new(x.to_vec(), b.to_vec()).unwrap()
    }

    const ARCOSH_1_5: f64 = 0.962_423_650_119_206_9;

    #[test]
    fn zero_potential_two_site() {
        let p = Potential::zero(2).unwrap();
        let spec = spectral_data(&p).unwrap();
        let k = kappa_on_real_axis(&p, &spec, 3).unwrap();
        assert_eq!(k.len(), 6);
        let at = |l: f64| *k.iter().find(|s| (s.lambda - l).abs() < 1e-12).unwrap();
        assert_eq!(at(-2.0).re_kappa, 0.0);
        assert!((at(0.0).re_kappa - PI).abs() < 1e-9);
        assert_eq!(at(2.0).re_kappa, 2.0 * PI);
        assert!(k.iter().all(|s| s.im_kappa == 0.0));
    }

    #[test]
    fn gap_boundary_values() {
        let p = pot(&[0.0, 0.0], &[1.0, -1.0]);
        let spec = spectral_data(&p).unwrap();
        let s = kappa_at(&p, &spec, 0.0).unwrap();
        assert!((s.im_kappa - ARCOSH_1_5).abs() < 1e-14);
        assert_eq!(s.re_kappa, PI);
        let slits = slit_data(&p).unwrap();
        assert_eq!(slits.len(), 1);
        assert!((slits[0].height - 0.962_423_650_1).abs() < 1e-10);

        let p = pot(&[0.3, -0.3], &[0.0, 0.0]);
        let slits = slit_data(&p).unwrap();
        assert!((slits[0].at_nu.im_kappa - 0.6).abs() < 1e-14);
    }

    #[test]
    fn endpoints_and_defining_relation() {
        for seed in 0..10 {
            let p = Potential::random(2 + seed as usize % 7, 1.0, seed).unwrap();
            let spec = spectral_data(&p).unwrap();
            let k = kappa_on_real_axis(&p, &spec, 9).unwrap();
            assert_eq!(k[0].re_kappa, 0.0);
            assert_eq!(k.last().unwrap().re_kappa, PI * p.period() as f64);
            for s in &k {
                assert!(s.defining_residual(&p) < 1e-9, "{s:?}");
            }
        }
        assert!(kappa_on_real_axis(
            &Potential::zero(2).unwrap(),
            &spectral_data(&Potential::zero(2).unwrap()).unwrap(),
            1
        )
        .is_err());
    }

    #[test]
    fn estimate_examples() {
        let r = verify_estimates(&Potential::zero(2).unwrap()).unwrap();
        let want = [0.25, 4.0, 4.0, 32.0, 32.0];
        for (a, b) in r.chain().iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{:?}", r.chain());
        }
        assert!(r.holds());
        assert_eq!(r.equalities, [false, true, false, true]);

        let r = verify_estimates(&pot(&[0.0, 0.0], &[1.0, -1.0])).unwrap();
        assert!((r.mid - 5.0).abs() < 1e-12 && (r.quantity - 6.0).abs() < 1e-12);
        assert!((r.rhs1 - 40.0).abs() < 1e-12);
        // e^{2 arcosh 1.5} = (7 + 3√5)/2
        let grow = 0.5 * (7.0 + 3.0 * 5f64.sqrt());
        assert!((r.lhs1 - 0.25 * grow).abs() < 1e-12);
        assert!((r.rhs2 - 32.0 * grow).abs() < 1e-10);
        assert!(r.holds());
    }

    #[test]
    fn left_estimate_fails_for_strong_two_site_coupling() {
        // x = (1, -1): |ψ_1| = 2 but the spectrum has width 4 cosh 1,
        // so ¼e^{2|ψ|} exceeds ¼ width²
        let r = verify_estimates(&pot(&[1.0, -1.0], &[0.0, 0.0])).unwrap();
        assert!((r.mid - 4.0 * 1f64.cosh().powi(2)).abs() < 1e-12);
        assert!((r.lhs1 - 0.25 * 4f64.exp()).abs() < 1e-9);
        assert_eq!(r.violations(), vec![0]);
    }
}
