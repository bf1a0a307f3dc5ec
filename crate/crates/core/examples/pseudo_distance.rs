//! Code distances: `D`, the softened `D^t`, and the expectation identity
//! `E D(x, y) = √(2/π)‖x − y‖` for Gaussian maps.

use qembed::experiments::expectation_identity;
use qembed::stats::{norm2, sub};
use qembed::{pseudo_distance, soft_distance_report, soft_pseudo_distance};
use qembed::{Ensemble, QuantizedMap, QuantizerConfig, Result, SQRT_2_OVER_PI};

fn main() -> Result<()> {
    let x = [0.9, -0.3, 0.2, 0.0, 0.5];
    let y = [0.4, 0.1, -0.2, 0.3, 0.5];
    let dist = norm2(&sub(&x, &y));
    let map = QuantizedMap::sample(&Ensemble::gaussian(), 512, 5, QuantizerConfig::floor(0.25)?, true, 3)?;

    println!("|x - y|          = {dist:.5}");
    println!("sqrt(2/pi)|x-y|  = {:.5}", SQRT_2_OVER_PI * dist);
    println!("D(x, y)          = {:.5}", pseudo_distance(&map, &x, &y)?);
    for t in [-0.1, 0.0, 0.1] {
        println!("D^{t:<5}         = {:.5}", soft_pseudo_distance(&map, &x, &y, t)?);
    }

    let rep = soft_distance_report(&map, &x, &y, 0.1)?;
    println!("sandwich D^t <= D <= D^-t: {}", rep.sandwich_holds());

    let mean = expectation_identity(&Ensemble::gaussian(), &x, &y, 0.25, 16, 5000, 9)?;
    println!("mean D over 5000 maps = {:.5} +- {:.5}", mean.value, mean.stderr);
    Ok(())
}
