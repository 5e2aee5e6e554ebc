//! Run one verification suite at the quick budget and print the verdicts,
//! as `bnet verify` does.
//!
//!     cargo run --release --example verify_suite [suite] [seed]

use bnet::experiments::{run_suite, summary_text, Budget, Overrides, Suite};
use bnet::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("structural").parse()?;
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let reports = run_suite(suite, seed, Budget::Quick, Overrides::default())?;
    print!("{}", summary_text(&reports));
    Ok(())
}
