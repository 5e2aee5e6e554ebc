//! Print a small arrow field as text, with the left-most and right-most
//! paths from the origin and the dual paths that bound them.
//!
//!     cargo run --example arrow_field [beta] [seed]

use bnet::lattice::{
    check_noncrossing, sample_config, trace_dual_extremal, trace_extremal, Side, SiteState, Window,
};
use bnet::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let beta: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.3);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let (hw, h) = (24, 16);
    let cfg = sample_config(Window::centered(hw, 0, h)?, beta, seed)?;
    let l = trace_extremal(&cfg, (0, 0), Side::Left)?;
    let r = trace_extremal(&cfg, (0, 0), Side::Right)?;
    let dual = cfg.dual();
    let dl = trace_dual_extremal(&dual, (-3, h), Side::Left)?;
    let dr = trace_dual_extremal(&dual, (3, h), Side::Right)?;

    // time runs upwards; `<` `>` `^` mark left, right and branching sites,
    // `L` `R` the extremal paths, `:` the dual paths
    for t in (0..=h).rev() {
        let row: String = (-hw..=hw)
            .map(|x| {
                if l.at(t) == Some(x) {
                    'L'
                } else if r.at(t) == Some(x) {
                    'R'
                } else if (x + t) % 2 != 0 {
                    if dl.at(t) == Some(x) || dr.at(t) == Some(x) {
                        ':'
                    } else {
                        ' '
                    }
                } else if t == h {
                    '.'
                } else {
                    match cfg.state(x, t) {
                        SiteState::LeftOnly => '<',
                        SiteState::RightOnly => '>',
                        SiteState::Both => '^',
                    }
                }
            })
            .collect();
        println!("{t:>3} {row}");
    }
    println!(
        "beta {beta}, seed {seed}, forward and dual paths cross: {}",
        !check_noncrossing(&cfg)
    );
    Ok(())
}
