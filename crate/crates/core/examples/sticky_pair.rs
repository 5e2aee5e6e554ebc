//! Solve the sticky left-right pair on one noise path and print the two
//! paths and the clocks, then compare the law of the total sticky time
//! with the exponential law of rate 4.
//!
//!     cargo run --release --example sticky_pair

use bnet::sde::{sample_noise, sample_sticky_time, solve_lr};
use bnet::stats::ks_one_sample;
use bnet::Result;

fn main() -> Result<()> {
    let noise = sample_noise(1e-3, 2.0, 3)?;
    let sol = solve_lr(&noise, 0.0, 0.0)?;
    println!("{:>5} {:>8} {:>8} {:>8} {:>8}", "t", "l", "r", "T", "S");
    for k in (0..sol.len()).step_by(200) {
        println!(
            "{:>5.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            sol.time(k),
            sol.l[k],
            sol.r[k],
            sol.clock_t[k],
            sol.clock_s[k]
        );
    }

    let s: Vec<f64> = (0..2000)
        .map(|i| sample_sticky_time(1e-3, 5.0, 0.0, 0.0, i))
        .collect::<Result<_>>()?;
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let ks = ks_one_sample(&s, |x| 1.0 - (-4.0 * x.max(0.0)).exp())?;
    println!(
        "total sticky time by t = 5: mean {mean:.4} (limit 0.25), KS {:.4}, p {:.3}",
        ks.statistic, ks.p_value
    );
    Ok(())
}
