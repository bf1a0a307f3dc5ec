//! Distortion decay with `M` on a sparse set, written as CSV and gnuplot data.
//!
//! `cargo run --release --example quasi_isometry_sweep -- out-dir`

use std::path::PathBuf;

use qembed::experiments::{quasi_isometry_sweep, report, TrialPlan};
use qembed::{Ensemble, Result, SetSpec};

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("qembed-qi"), PathBuf::from);
    let mut plan = TrialPlan::new(SetSpec::sparse(128, 3, 1.0)?, Ensemble::gaussian(), 0.5, vec![64, 128, 256, 512, 1024]);
    plan.pairs_per_m = 50;
    plan.trials_per_m = 8;
    plan.master_seed = 2024;

    let res = quasi_isometry_sweep(&plan)?.judge_slope(-0.7, -0.3);
    for p in &res.per_m {
        println!("M = {:>5}  eps_hat = {:.4}  (q90 {:.4}, worst {:.4})", p.m, p.statistic, p.q90, p.worst);
    }
    if let Some(f) = res.fit {
        println!("slope {:.3} +- {:.3}, verdict {}", f.slope, f.stderr, res.verdict.name());
    }
    let (csv, dat) = report::write_experiment(&res, &dir)?;
    println!("wrote {} and {}", csv.display(), dat.display());
    Ok(())
}
