//! Forward map, then back: recover a potential from its MO vector by Newton
//! continuation, and follow the homotopy path.
//!
//! cargo run --example inverse_reconstruction

use periodic_jacobi::inverse::roundtrip_check;
use periodic_jacobi::{mo_map, solve_inverse, InverseOptions, Potential, Result};

fn main() -> Result<()> {
    let opts = InverseOptions::default();
    let p = Potential::random(6, 1.0, 42)?;
    let psi = mo_map(&p)?;
    println!("ψ(q) = {psi:+.6?}");

    let r = solve_inverse(&psi, p.period(), &opts)?;
    println!(
        "recovered in {} Newton steps over {} legs, residual {:.2e}",
        r.newton_iterations,
        r.homotopy_path.len() - 1,
        r.residual
    );
    for pt in &r.homotopy_path {
        println!("  s = {:.4}  residual = {:.2e}", pt.s, pt.residual);
    }
    println!("|q - q_recovered| = {:.2e}", p.distance(&r.q));

    // any vector is the MO data of exactly one potential
    let target = [1.2, -0.7, 0.0, 0.4];
    let q = solve_inverse(&target, 3, &opts)?.q;
    println!("target {target:?} -> x = {:+.6?}, b = {:+.6?}", q.x(), q.b_seq());

    let worst = (0..10)
        .map(|seed| roundtrip_check(&Potential::random(5, 1.0, seed)?, &opts))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("worst round trip over 10 random potentials: {worst:.2e}");
    Ok(())
}
