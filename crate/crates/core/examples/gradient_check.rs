//! Analytic gradients against central differences, and the same randomized
//! suites the `verify` subcommand runs.
//!
//! cargo run --example gradient_check

use periodic_jacobi::fd::central_gradient;
use periodic_jacobi::gradients::grad_lambda_crit;
use periodic_jacobi::spectrum::{band_edges, critical_points};
use periodic_jacobi::verify::{gradcheck, run_suite, Suite};
use periodic_jacobi::{Potential, Result};

fn main() -> Result<()> {
    let p = Potential::random(4, 1.0, 8)?;
    let n = p.period();
    let analytic = grad_lambda_crit(&p, 2)?.project();
    let numeric = central_gradient(
        |u| {
            let q = Potential::embed(u, n)?;
            Ok(critical_points(&q, &band_edges(&q)?)?[1])
        },
        &p.project(),
        1e-6,
    )?;
    println!("dλ_2 analytic   {analytic:+.8?}");
    println!("dλ_2 difference {numeric:+.8?}");
    println!("worst relative error over all gradients: {:.2e}", gradcheck(&p)?);

    for suite in Suite::ALL {
        let r = run_suite(suite, 5, 10, 0)?;
        println!(
            "{:>10?}: max residual {:.2e} (threshold {:.0e}) {}",
            r.suite,
            r.max_residual,
            r.threshold,
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
