//! The quasimomentum maps each band onto a segment of the real axis and each
//! gap onto a vertical slit whose height is |ψ_n|.
//!
//! cargo run --example quasimomentum_slits

use std::f64::consts::PI;

use periodic_jacobi::quasimomentum::{kappa_on_real_axis, slit_data_from};
use periodic_jacobi::{mo_data, Potential, Result};

fn main() -> Result<()> {
    let p = Potential::random(4, 0.9, 5)?;
    let (spec, mo) = mo_data(&p)?;

    println!("{:>12} {:>10} {:>10}", "λ", "re κ / π", "im κ");
    for s in kappa_on_real_axis(&p, &spec, 5)? {
        println!("{:+12.6} {:10.6} {:10.6}", s.lambda, s.re_kappa / PI, s.im_kappa);
    }

    for slit in slit_data_from(&p, &spec)? {
        let n = slit.gap;
        println!(
            "slit {n} at re κ = {}π: height {:.10} (|ψ| = {:.10}), im κ(ν) = {:.6} (ψ1 = {:+.6})",
            n,
            slit.height,
            mo.height[n - 1],
            slit.at_nu.im_kappa,
            mo.psi1[n - 1]
        );
    }
    Ok(())
}
