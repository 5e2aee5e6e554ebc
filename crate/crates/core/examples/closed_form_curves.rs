//! Tabulate the closed forms: the density psi, the avoidance function
//! Psi_eps for a few interval lengths, and the left-flux bound.
//!
//!     cargo run --example closed_form_curves

use bnet::closed_forms::{big_psi, left_flux_bound, pde_residual, small_psi};
use bnet::Result;

fn main() -> Result<()> {
    let eps = [0.25, 0.5, 1.0, 2.0];
    print!("{:>6} {:>8}", "t", "psi");
    for e in eps {
        print!(" {:>9}", format!("Psi_{e}"));
    }
    println!(" {:>11}", "flux(0.1,t)");
    for t in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        print!("{t:>6.2} {:>8.4}", small_psi(t)?);
        for e in eps {
            print!(" {:>9.5}", big_psi(e, t)?);
        }
        println!(" {:>11.4}", left_flux_bound(0.1, t.max(0.1))?);
    }
    println!(
        "heat-equation residual at eps 1, t 1: {:.2e}",
        pde_residual(1.0, 1.0, 1e-4)?
    );
    Ok(())
}
