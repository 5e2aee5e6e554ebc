//! Evolve branching-coalescing walks from a full row and compare the
//! rescaled density of occupied sites with psi(t).
//!
//!     cargo run --release --example particle_density [beta]

use bnet::closed_forms::small_psi;
use bnet::lattice::{sample_config, Window};
use bnet::particles::{evolve, full_slice};
use bnet::Result;

fn main() -> Result<()> {
    let beta: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.05);
    let steps = (2.0 / (beta * beta)).round() as i64;
    // paths move at most one site per step, so counting in the middle third
    // of the starting row avoids edge effects, and the window needs a margin
    // of `steps` around the row
    let hw = 3 * steps;
    let cfg = sample_config(Window::centered(hw + steps + 2, 0, steps)?, beta, 7)?;
    let tr = evolve(&cfg, &full_slice(0, -hw, hw), steps)?;
    let (lo, hi) = (-steps, steps);
    println!("{:>6} {:>10} {:>10}", "t", "density", "psi(t)");
    for n in (steps / 8..=steps).step_by((steps / 8) as usize) {
        let count = tr.slices[n as usize].count_in(lo, hi) as f64;
        let t = n as f64 * beta * beta;
        let density = count / ((hi - lo) as f64 * beta);
        println!("{t:>6.3} {density:>10.4} {:>10.4}", small_psi(t)?);
    }
    Ok(())
}
