//! Exact binomial mean absolute deviation and the Stirling sandwich.

use qembed::experiments::{bernoulli_floor_distortion, stirling_gosper_check};
use qembed::Result;

fn main() -> Result<()> {
    println!("{:>4} {:>12} {:>12} {:>12} {:>12}", "k0", "MAD", "gap", "gap bound", "distortion");
    for k0 in [2, 4, 8, 16, 32, 64] {
        let r = bernoulli_floor_distortion(k0)?;
        println!("{k0:>4} {:>12.8} {:>12.3e} {:>12.3e} {:>12.3e}", r.mad, r.gap, r.bound, r.distortion);
    }
    let s = stirling_gosper_check(100_000)?;
    println!(
        "Stirling sandwich up to n = {}: {} failures, tightest margins {:.2e} / {:.2e}",
        s.n_max,
        s.failures.len(),
        s.min_lower_margin,
        s.min_upper_margin
    );
    Ok(())
}
