//! Rescale lattice paths into the compactified path space and measure
//! path and Hausdorff distances between extremal paths.
//!
//!     cargo run --example path_metric

use bnet::lattice::{sample_config, trace_extremal, Side, Window};
use bnet::pathspace::{hausdorff_dist, path_dist, rescale_path};
use bnet::Result;

fn main() -> Result<()> {
    let eps = 0.1;
    let cfg = sample_config(Window::centered(300, 0, 200)?, eps, 2)?;
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for x in (-20..=20).step_by(10) {
        lefts.push(rescale_path(
            &trace_extremal(&cfg, (x, 0), Side::Left)?,
            eps,
        )?);
        rights.push(rescale_path(
            &trace_extremal(&cfg, (x, 0), Side::Right)?,
            eps,
        )?);
    }
    for (i, (l, r)) in lefts.iter().zip(&rights).enumerate() {
        println!(
            "start {:>5.1}: d(left, right) = {:.5}",
            l.value_at(l.sigma()),
            path_dist(l, r)?
        );
        if i > 0 {
            println!(
                "              d(left, previous left) = {:.5}",
                path_dist(l, &lefts[i - 1])?
            );
        }
    }
    println!(
        "Hausdorff distance, lefts vs rights: {:.5}",
        hausdorff_dist(&lefts, &rights)?
    );
    Ok(())
}
