//! Embeds a few sparse vectors with a dithered Gaussian map and prints their codes.
//!
//! Run with `cargo run --example embed_vectors`.

use qembed::quantizer::write_codes;
use qembed::rng::rng_from;
use qembed::{Ensemble, QuantizedMap, QuantizerConfig, Result, SetSpec};

fn main() -> Result<()> {
    let set = SetSpec::sparse(32, 3, 1.0)?;
    let mut r = rng_from(1);
    let xs: Vec<Vec<f64>> = (0..4).map(|_| set.sample_point(&mut r)).collect();

    let map = QuantizedMap::sample(&Ensemble::gaussian(), 24, 32, QuantizerConfig::floor(0.5)?, true, 42)?;
    let codes = xs.iter().map(|x| map.apply(x)).collect::<Result<Vec<_>>>()?;
    write_codes(std::io::stdout().lock(), &codes)?;

    // the same seed rebuilds the same map
    let again = QuantizedMap::sample(&Ensemble::gaussian(), 24, 32, QuantizerConfig::floor(0.5)?, true, 42)?;
    assert_eq!(again.apply(&xs[0])?, codes[0]);
    println!("codes for {} points, {} measurements each", codes.len(), map.rows());
    Ok(())
}
