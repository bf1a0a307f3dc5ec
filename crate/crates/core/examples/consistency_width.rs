//! How far apart can two points be and still share a code?
//!
//! Rays through a sparse set are scanned and bisected for the last radius
//! that keeps the code unchanged; the worst ray per map is the statistic.

use qembed::experiments::{consistency_width_sweep, TrialPlan};
use qembed::{Ensemble, Result, SetSpec};

fn main() -> Result<()> {
    let mut plan = TrialPlan::new(SetSpec::sparse(128, 3, 1.0)?, Ensemble::gaussian(), 0.5, vec![64, 128, 256, 512]);
    plan.pairs_per_m = 40;
    plan.trials_per_m = 6;
    plan.master_seed = 8;
    let res = consistency_width_sweep(&plan)?;
    for p in &res.per_m {
        println!("M = {:>4}  width = {:.5}  censored maps = {}", p.m, p.statistic, p.censored_trials);
    }
    println!("fitted slope: {:?}", res.slope());

    // a finite grid has a hard floor: once every point has its own code the width is 0
    let mut grid = TrialPlan::new(SetSpec::mesh(2, 0.25, 1.0)?, Ensemble::rademacher(), 0.5, vec![4, 16, 64]);
    grid.k0_filter = false;
    grid.trials_per_m = 4;
    for p in consistency_width_sweep(&grid)?.per_m {
        println!("mesh, M = {:>3}: width {:.4}", p.m, p.statistic);
    }
    Ok(())
}
