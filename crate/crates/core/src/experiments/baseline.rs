use crate::ensembles::{sample_matrix, Ensemble};
use crate::error::{Error, Result};
use crate::geometry::SetSpec;
use crate::quantizer::{QuantizedMap, QuantizerConfig, QuantizerVariant};
use crate::rng;
use crate::stats::{norm2, sub};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub pairs: usize,
    /// `max |‖Φ(x − y)‖/(√M‖x − y‖) − 1|` over pairs with `x ≠ y`.
    pub eps_hat: f64,
    /// Pairs violating `(1 ± ε̂)‖x − y‖ ± δ` for the rounded codes.
    pub violations: usize,
}

impl BaselineReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Measures the linear distortion of `Φ` on sampled pairs, then checks that
/// rounding `Φx` to `δZ` keeps every pair within `(1 ± ε̂)‖x − y‖ ± δ`.
pub fn linear_baseline(
    ensemble: &Ensemble,
    set: &SetSpec,
    m: usize,
    delta: f64,
    pairs: usize,
    seed: u64,
) -> Result<BaselineReport> {
    if pairs == 0 {
        return Err(Error::invalid("pairs must be positive"));
    }
    let n = set.dim();
    let phi = sample_matrix(ensemble, m, n, rng::derive_seed(seed, &[0]))?;
    let map = QuantizedMap::new(phi, None, QuantizerConfig::new(delta, QuantizerVariant::Round)?)?;
    let mut r = rng::rng_at(seed, &[1]);
    let sampled: Vec<(Vec<f64>, Vec<f64>)> =
        (0..pairs).map(|_| (set.sample_point(&mut r), set.sample_point(&mut r))).collect();
    let sm = (m as f64).sqrt();
    let mut eps_hat = 0.0_f64;
    for (x, y) in &sampled {
        let d = norm2(&sub(x, y));
        if d > 0.0 {
            let proj = norm2(&map.matrix().project(&sub(x, y))?);
            eps_hat = eps_hat.max((proj / (sm * d) - 1.0).abs());
        }
    }
    let mut violations = 0;
    for (x, y) in &sampled {
        let d = norm2(&sub(x, y));
        let (cx, cy) = (map.apply(x)?, map.apply(y)?);
        let code_dist = cx.0.iter().zip(&cy.0).map(|(a, b)| ((a - b) as f64 * delta).powi(2)).sum::<f64>().sqrt() / sm;
        let slack = 1e-12 * (1.0 + d + delta);
        if code_dist < (1.0 - eps_hat) * d - delta - slack || code_dist > (1.0 + eps_hat) * d + delta + slack {
            violations += 1;
        }
    }
    Ok(BaselineReport { pairs, eps_hat, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use rand_distr::{Distribution, StandardNormal};

    fn cloud(seed: u64) -> SetSpec {
        let mut r = rng_from(seed);
        SetSpec::finite((0..32).map(|_| (0..64).map(|_| StandardNormal.sample(&mut r)).collect()).collect()).unwrap()
    }

    #[test]
    fn quantized_relation_holds_with_measured_eps() {
        let set = cloud(1);
        let rep = linear_baseline(&Ensemble::gaussian(), &set, 4096, 0.5, 100, 2).unwrap();
        assert!(rep.eps_hat < 0.1, "{rep:?}");
        assert!(rep.holds());
        let again = linear_baseline(&Ensemble::gaussian(), &set, 4096, 0.5, 100, 3).unwrap();
        assert!(again.holds());
    }

    #[test]
    fn identical_points() {
        let set = SetSpec::finite(vec![vec![1.0, 2.0]]).unwrap();
        let rep = linear_baseline(&Ensemble::rademacher(), &set, 8, 1.0, 5, 0).unwrap();
        assert_eq!((rep.eps_hat, rep.violations), (0.0, 0));
    }
}
