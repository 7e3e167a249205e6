//! Plots the discriminant as text and lists bands, gaps and the auxiliary
//! spectra inside each gap.
//!
//! cargo run --example band_structure

use periodic_jacobi::recurrence::discriminant_first;
use periodic_jacobi::{spectral_data, Potential, Result};

fn main() -> Result<()> {
    let p = Potential::random(5, 1.0, 3)?;
    let spec = spectral_data(&p)?;
    let (lo, hi) = (spec.edges[0] - 0.2, spec.edges[spec.edges.len() - 1] + 0.2);

    println!("Δ(λ) for a period-5 potential; '#' marks the spectrum |Δ| <= 1");
    let width = 60;
    for i in 0..=40 {
        let lambda = lo + (hi - lo) * i as f64 / 40.0;
        let d = discriminant_first(&p, lambda).0;
        let col = ((d.clamp(-3.0, 3.0) + 3.0) / 6.0 * width as f64).round() as usize;
        let mut line: Vec<char> = vec![' '; width + 1];
        line[width / 2] = '|';
        line[col] = if d.abs() <= 1.0 { '#' } else { '*' };
        println!("{lambda:+8.4} {}", line.into_iter().collect::<String>());
    }

    for n in 1..=p.period() {
        let (a, b) = spec.band(n);
        println!("band {n}: [{a:+.8}, {b:+.8}]");
        if n < p.period() {
            let (g0, g1) = spec.gap(n);
            println!(
                "  gap {n}: ({g0:+.8}, {g1:+.8})  ν = {:+.8}  μ = {:+.8}  λ_crit = {:+.8}",
                spec.nu[n - 1], spec.mu[n - 1], spec.crit[n - 1]
            );
        }
    }
    Ok(())
}
