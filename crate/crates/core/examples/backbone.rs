//! Build backbone slices from a deep full start and report the count per
//! unit interval against the Poisson limit of intensity 2.
//!
//!     cargo run --release --example backbone [beta] [replicas]

use bnet::experiments::{backbone_depth, backbone_experiment};
use bnet::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let beta: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let replicas: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let depth = backbone_depth(beta);
    println!("beta {beta}, burn-in {depth} steps, {replicas} replicas");
    for r in backbone_experiment(beta, depth, 100, replicas, 0)? {
        println!("{}", r.summary_line());
    }
    Ok(())
}
