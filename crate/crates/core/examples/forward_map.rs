//! Spectral data and MO coordinates of a few potentials.
//!
//! cargo run --example forward_map

use periodic_jacobi::{mo_data, Potential, Result};

fn show(label: &str, p: &Potential) -> Result<()> {
    let (spec, mo) = mo_data(p)?;
    println!("{label} (N = {})", p.period());
    for n in 1..p.period() {
        let (lo, hi) = spec.gap(n);
        let state = if spec.gap_closed[n - 1] { "closed" } else { "open" };
        println!(
            "  gap {n}: [{lo:+.6}, {hi:+.6}] {state:6}  ψ1 = {:+.10}  ψ2 = {:+.10}  |ψ| = {:.6}",
            mo.psi1[n - 1], mo.psi2[n - 1], mo.height[n - 1]
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    show("zero potential", &Potential::zero(4)?)?;
    // ψ = (0, -arcosh 1.5)
    show("x = 0, b = (1, -1)", &Potential::new(vec![0.0, 0.0], vec![1.0, -1.0])?)?;
    // ψ = (x_1 - x_2, 0)
    show("x = (0.3, -0.3), b = 0", &Potential::new(vec![0.3, -0.3], vec![0.0, 0.0])?)?;
    show("random, seed 7", &Potential::random(6, 0.8, 7)?)?;
    Ok(())
}
