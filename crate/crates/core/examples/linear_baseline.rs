//! Unquantized distortion of `Φ` and the rounded-code relation it implies.

use qembed::experiments::linear_baseline;
use qembed::rng::rng_from;
use qembed::{Ensemble, Result, SetSpec};
use rand_distr::{Distribution, StandardNormal};

fn main() -> Result<()> {
    let mut r = rng_from(5);
    let points: Vec<Vec<f64>> = (0..32).map(|_| (0..64).map(|_| StandardNormal.sample(&mut r)).collect()).collect();
    let set = SetSpec::finite(points)?;
    for m in [256, 1024, 4096] {
        let rep = linear_baseline(&Ensemble::gaussian(), &set, m, 0.5, 200, 7)?;
        println!("M = {m:>4}: eps_hat = {:.4}, violations = {}", rep.eps_hat, rep.violations);
    }
    Ok(())
}
