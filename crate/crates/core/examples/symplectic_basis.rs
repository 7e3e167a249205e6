//! The gradients of ν_n and ψ_{1,n} are canonically paired:
//! dν∧dν = 0, dψ1∧dψ1 = 0, dψ1∧dν = 2δ.
//!
//! cargo run --example symplectic_basis

use periodic_jacobi::gradients::{grad_nu, grad_psi1, symplectic_form, verify_basis};
use periodic_jacobi::{Potential, Result};

fn main() -> Result<()> {
    let p = Potential::random(4, 1.0, 11)?;
    let gaps = p.period() - 1;
    let nu: Vec<_> = (1..=gaps).map(|n| grad_nu(&p, n)).collect::<Result<_>>()?;
    let psi: Vec<_> = (1..=gaps).map(|n| grad_psi1(&p, n)).collect::<Result<_>>()?;

    println!("dψ1_n ∧ dν_m:");
    for f in &psi {
        let row: Vec<String> = nu
            .iter()
            .map(|g| symplectic_form(f, g).map(|v| format!("{v:+.3e}")))
            .collect::<Result<_>>()?;
        println!("  {}", row.join("  "));
    }

    let r = verify_basis(&p)?;
    println!("max |dν∧dν|        = {:.2e}", r.nu_nu);
    println!("max |dψ1∧dψ1|      = {:.2e}", r.psi_psi);
    println!("max |dψ1∧dν - 2δ|  = {:.2e}", r.psi_nu);
    println!("σ_min / ‖·‖        = {:.3e}  (basis: {})", r.sigma_min / r.norm, r.is_basis());
    Ok(())
}
