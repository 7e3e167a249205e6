//! Compares the size of the slits with the width of the spectrum and the
//! size of the coefficients. The leftmost comparison
//! ¼e^{2 max|ψ|} ≤ ¼(λ_N^- - λ_0^+)² does not hold in general; this shows a
//! two-site counterexample next to potentials where the chain holds.
//!
//! cargo run --example stability_estimates

use periodic_jacobi::quasimomentum::verify_estimates;
use periodic_jacobi::{Potential, Result};

fn report(label: &str, p: &Potential) -> Result<()> {
    let r = verify_estimates(p)?;
    println!("{label}");
    println!(
        "  ¼e^(2max|ψ|) = {:.4}  ¼width² = {:.4}  Σb²+2Σa² = {:.4}  N·width² = {:.4}  16N·e^(2max|ψ|) = {:.4}",
        r.lhs1, r.mid, r.quantity, r.rhs1, r.rhs2
    );
    let v = r.violations();
    if v.is_empty() {
        println!("  chain holds");
    } else {
        println!("  violated comparisons: {v:?}");
    }
    Ok(())
}

fn main() -> Result<()> {
    report("zero potential", &Potential::zero(3)?)?;
    report("x = 0, b = (1, -1)", &Potential::new(vec![0.0, 0.0], vec![1.0, -1.0])?)?;
    report("x = (1, -1), b = 0", &Potential::new(vec![1.0, -1.0], vec![0.0, 0.0])?)?;
    for n in [3, 6, 10] {
        report(&format!("random, N = {n}"), &Potential::random(n, 1.0, n as u64)?)?;
    }
    Ok(())
}
