//! Fit the eps-bias of the lattice-to-continuum experiments by running each
//! one at eps and 2 eps on seed 1, apart from the acceptance seed 0. The
//! constants in `tolerances::bias` are the printed `c` values.
//!
//!     cargo run --release --example calibrate [replicas-scale]

use bnet::experiments::{
    avoidance_experiment, backbone_depth, backbone_experiment, calibrate_bias, density_experiment,
    Calibration,
};
use bnet::Result;

const SEED: u64 = 1;

fn show(name: &str, c: &Calibration) {
    println!(
        "{name:<28} eps {:<6} bias(eps) {:+.4}  bias(2eps) {:+.4}  se {:.4}  slope {:.2}  c {}",
        c.eps, c.bias_eps, c.bias_2eps, c.se, c.slope, c.c
    );
}

fn main() -> Result<()> {
    let scale: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let c = calibrate_bias(
        |e| density_experiment(e, 1.0, 4.0, 1000 * scale, SEED),
        0.01,
    )?;
    show("density t=1", &c);
    let c = calibrate_bias(
        |e| avoidance_experiment(e, 1.0, 1.0, 4000 * scale, SEED),
        0.01,
    )?;
    show("avoidance gap=1 t=1", &c);
    let pick = |i: usize| {
        move |e: f64| -> Result<_> {
            Ok(backbone_experiment(e, backbone_depth(e), 100, 40 * scale, SEED)?.remove(i))
        }
    };
    show("backbone intensity", &calibrate_bias(pick(1), 0.02)?);
    show("backbone dispersion", &calibrate_bias(pick(2), 0.02)?);
    Ok(())
}
