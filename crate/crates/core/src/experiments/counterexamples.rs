use rayon::prelude::*;

use crate::distances::pseudo_distance;
use crate::ensembles::{sample_matrix, Ensemble};
use crate::error::{Error, Result};
use crate::quantizer::{QuantizedMap, QuantizerConfig, QuantizerVariant};
use crate::rng;
use crate::stats::{Estimate, Moments};
use crate::SQRT_2_OVER_PI;

#[derive(Debug, Clone, PartialEq)]
pub struct NoDitherReport {
    pub trials: usize,
    /// Trials with `A(u) = A(v)`.
    pub identical: usize,
    pub pass_rate: f64,
    /// `‖u − v‖ = s/√k0`, a distance no undithered code can resolve.
    pub consistency_width: f64,
}

/// `u = 1` on the first `k0` coordinates, `v = (1 + s/k0) u`, Bernoulli `Φ`,
/// undithered rounding with `δ = 1`.
pub fn no_dither_counterexample(k0: usize, s: f64, m: usize, trials: usize, seed: u64) -> Result<NoDitherReport> {
    if k0 == 0 || m == 0 || trials == 0 {
        return Err(Error::invalid("k0, m and trials must be positive"));
    }
    if !(s > 0.0 && s < 0.5) {
        return Err(Error::invalid(format!("s must lie in (0, 1/2), got {s}")));
    }
    let u = vec![1.0; k0];
    let v: Vec<f64> = u.iter().map(|x| x * (1.0 + s / k0 as f64)).collect();
    let quantizer = QuantizerConfig::new(1.0, QuantizerVariant::Round)?;
    let identical = (0..trials)
        .into_par_iter()
        .map(|j| -> Result<bool> {
            let phi = sample_matrix(&Ensemble::rademacher(), m, k0, rng::derive_seed(seed, &[j as u64]))?;
            let map = QuantizedMap::new(phi, None, quantizer)?;
            Ok(map.apply(&u)? == map.apply(&v)?)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&same| same)
        .count();
    Ok(NoDitherReport {
        trials,
        identical,
        pass_rate: identical as f64 / trials as f64,
        consistency_width: s / (k0 as f64).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliFloorReport {
    pub trials: usize,
    /// Trials with `D(e₁, 0) = 1` exactly.
    pub exact: usize,
    pub min_d: f64,
    pub max_d: f64,
    /// `1 − √(2/π)`: the distortion no such map can avoid.
    pub floor: f64,
}

impl BernoulliFloorReport {
    pub fn holds(&self) -> bool {
        self.exact == self.trials
    }
}

/// `D(e₁, 0)` for dithered floor maps with Bernoulli `Φ` and `δ = 1`.
pub fn bernoulli_floor_check(m: usize, trials: usize, seed: u64) -> Result<BernoulliFloorReport> {
    let ds = bernoulli_floor_distances(&Ensemble::rademacher(), m, trials, seed)?;
    Ok(BernoulliFloorReport {
        trials,
        exact: ds.iter().filter(|&&d| d == 1.0).count(),
        min_d: ds.iter().copied().fold(f64::INFINITY, f64::min),
        max_d: ds.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        floor: 1.0 - SQRT_2_OVER_PI,
    })
}

/// Mean `D(e₁, 0)` for another ensemble; Gaussian maps concentrate near `√(2/π)`.
pub fn gaussian_contrast(ensemble: &Ensemble, m: usize, trials: usize, seed: u64) -> Result<Estimate> {
    let ds = bernoulli_floor_distances(ensemble, m, trials, seed)?;
    Ok(Moments::from_iter(ds).estimate())
}

fn bernoulli_floor_distances(ensemble: &Ensemble, m: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if m == 0 || trials == 0 {
        return Err(Error::invalid("m and trials must be positive"));
    }
    let quantizer = QuantizerConfig::floor(1.0)?;
    let (x, y) = ([1.0, 0.0], [0.0, 0.0]);
    (0..trials)
        .into_par_iter()
        .map(|j| {
            let map = QuantizedMap::sample(ensemble, m, 2, quantizer, true, rng::derive_seed(seed, &[j as u64]))?;
            pseudo_distance(&map, &x, &y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_dither_codes_coincide() {
        let r = no_dither_counterexample(64, 0.4, 128, 50, 1).unwrap();
        assert_eq!(r.pass_rate, 1.0);
        assert!((r.consistency_width - 0.05).abs() < 1e-15);
        assert!(no_dither_counterexample(64, 0.6, 16, 2, 1).is_err());
        assert!(no_dither_counterexample(64, 0.0, 16, 2, 1).is_err());
    }

    #[test]
    fn bernoulli_floor_is_exact() {
        let r = bernoulli_floor_check(64, 30, 2).unwrap();
        assert!(r.holds());
        assert_eq!((r.min_d, r.max_d), (1.0, 1.0));
        assert!(r.floor > 0.202);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let map = QuantizedMap::sample(&Ensemble::rademacher(), 32, 2, QuantizerConfig::floor(1.0).unwrap(), true, 4)
            .unwrap();
        assert_eq!(pseudo_distance(&map, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_contrast_concentrates() {
        let e = gaussian_contrast(&Ensemble::gaussian(), 256, 200, 3).unwrap();
        assert!(e.within(SQRT_2_OVER_PI, 4.0), "{e:?}");
    }
}
