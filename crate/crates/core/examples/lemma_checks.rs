//! Expectation, diameter and Chernoff checks on one pair of vectors.

use qembed::experiments::{
    expectation_check, diameter_check, chernoff_check, DIAMETER_FACTOR,
};
use qembed::stats::{norm2, sub};
use qembed::{Ensemble, Result, SetSpec};

fn main() -> Result<()> {
    let ens = Ensemble::gaussian();
    let u = vec![0.2, -0.1, 0.3, 0.0, 0.1, 0.25, -0.2, 0.05];
    let v = vec![0.1, 0.1, 0.2, 0.1, 0.0, 0.1, -0.1, 0.0];

    let l2 = expectation_check(&ens, &u, &v, 1.0, 32, &[0.05, 0.1, 0.2], 2000, 1)?;
    println!("E D^t vs mu = {:.4}:", l2.mu.value);
    for (t, e) in &l2.means {
        println!("  t = {t:<5} mean {:.4} +- {:.4}", e.value, e.stderr);
    }
    println!("  |E D^t - mu| / |t| <= {:.3}", l2.fitted_c);

    let set = SetSpec::sparse(64, 4, 1.0)?;
    let l4 = diameter_check(&set, 0.5, &ens, 64, 500, 2, DIAMETER_FACTOR)?;
    println!(
        "diameter: {} failures at factor {:.3}, {} at factor 1, worst ratio {:.3}",
        l4.failures, l4.factor, l4.failures_unit_factor, l4.max_ratio
    );

    let eps0 = norm2(&sub(&u, &v));
    let l5 = chernoff_check(&u, &v, 1.0, 0.0, &ens, 1.0, 64, None, 2000, 3, eps0)?;
    println!(
        "chernoff: p = {:.4}, P[count <= {}] = {:.4} <= {:.4}; lower bound on p: {:?}",
        l5.p_hat.value, l5.r, l5.left.value, l5.chernoff, l5.p_lower_ok
    );
    Ok(())
}
