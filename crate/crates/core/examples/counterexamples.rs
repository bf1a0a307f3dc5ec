//! Two constructions showing what goes wrong without dithering or with
//! Bernoulli entries.

use qembed::experiments::{no_dither_counterexample, bernoulli_floor_check, gaussian_contrast};
use qembed::{Ensemble, Result, SQRT_2_OVER_PI};

fn main() -> Result<()> {
    let nd = no_dither_counterexample(64, 0.4, 512, 500, 1)?;
    println!(
        "undithered rounding: {} of {} maps give A(u) = A(v) although |u - v| = {}",
        nd.identical, nd.trials, nd.consistency_width
    );

    let bf = bernoulli_floor_check(256, 100, 2)?;
    println!("Bernoulli maps: D(e1, 0) in [{}, {}] every time; distortion floor {:.4}", bf.min_d, bf.max_d, bf.floor);

    let g = gaussian_contrast(&Ensemble::gaussian(), 256, 100, 3)?;
    println!("Gaussian maps:  mean D(e1, 0) = {:.4} vs sqrt(2/pi) = {SQRT_2_OVER_PI:.4}", g.value);
    Ok(())
}
