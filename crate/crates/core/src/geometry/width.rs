//! Gaussian mean width `w(K) = E sup_{u∈K} |⟨g, u⟩|` by Monte Carlo over `g`
//! with the exact inner supremum.

use rand_distr::{Distribution, StandardNormal};

use super::SetSpec;
use crate::error::{check_dim, Error, Result};
use crate::rng;
use crate::stats::{dot, Moments};
use crate::SQRT_2_OVER_PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub draws: usize,
}

fn gaussian(r: &mut rng::Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(r)).collect()
}

pub fn width_estimate(set: &SetSpec, draws: usize, seed: u64) -> Result<WidthEstimate> {
    if draws < 2 {
        return Err(Error::invalid("width estimate needs at least 2 draws"));
    }
    set.validate()?;
    let n = set.dim();
    let parts = rng::map_chunks(draws, seed, |r, count| -> Result<Moments> {
        let mut m = Moments::default();
        for _ in 0..count {
            m.push(set.sup_oracle(&gaussian(r, n))?);
        }
        Ok(m)
    });
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    let e = total.estimate();
    Ok(WidthEstimate { mean: e.value, stderr: e.stderr, draws })
}

/// Homogeneity, diameter link and translation checks on common Gaussian draws.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthPropertiesReport {
    pub width: WidthEstimate,
    /// Largest `|sup(λK, g) − λ sup(K, g)| / (λ sup(K, g))` over draws.
    pub homogeneity_max_rel_err: f64,
    /// `√(2/π)‖K‖ ≤ ŵ + 3·stderr`.
    pub diameter_lower_ok: bool,
    /// `ŵ ≤ √N ‖K‖ + 3·stderr`.
    pub diameter_upper_ok: bool,
    /// Mean and stderr of `sup(K + t, g) − sup(K, g)`; finite sets only.
    pub translation_gap: Option<crate::stats::Estimate>,
    /// `|gap| ≤ √(2/π)‖t‖ + 3·stderr`.
    pub translation_ok: Option<bool>,
}

impl WidthPropertiesReport {
    /// Per-draw homogeneity holds up to a few ulps of relative rounding.
    pub fn homogeneity_ok(&self) -> bool {
        self.homogeneity_max_rel_err <= 1e-14
    }

    pub fn all_ok(&self) -> bool {
        self.homogeneity_ok()
            && self.diameter_lower_ok
            && self.diameter_upper_ok
            && self.translation_ok.unwrap_or(true)
    }
}

pub fn width_properties_check(
    set: &SetSpec,
    lambda: f64,
    shift: &[f64],
    draws: usize,
    seed: u64,
) -> Result<WidthPropertiesReport> {
    if draws < 2 {
        return Err(Error::invalid("need at least 2 draws"));
    }
    check_dim(set.dim(), shift.len())?;
    let scaled = set.scaled(lambda)?;
    let moved = if set.is_finite() { Some(set.translated(shift)?) } else { None };
    let n = set.dim();
    let parts = rng::map_chunks(draws, seed, |r, count| -> Result<(Moments, f64, Moments)> {
        let mut base = Moments::default();
        let mut rel = 0.0_f64;
        let mut diff = Moments::default();
        for _ in 0..count {
            let g = gaussian(r, n);
            let s = set.sup_oracle(&g)?;
            let s_scaled = scaled.sup_oracle(&g)?;
            if s > 0.0 {
                rel = rel.max((s_scaled - lambda * s).abs() / (lambda * s));
            }
            base.push(s);
            if let Some(m) = &moved {
                diff.push(m.sup_oracle(&g)? - s);
            }
        }
        Ok((base, rel, diff))
    });
    let (mut base, mut rel, mut diff) = (Moments::default(), 0.0_f64, Moments::default());
    for p in parts {
        let (b, r, d) = p?;
        base = base.merge(b);
        rel = rel.max(r);
        diff = diff.merge(d);
    }
    let e = base.estimate();
    let width = WidthEstimate { mean: e.value, stderr: e.stderr, draws };
    let d = set.diameter();
    let slack = 3.0 * width.stderr;
    let (translation_gap, translation_ok) = if moved.is_some() {
        let gap = diff.estimate();
        let bound = SQRT_2_OVER_PI * dot(shift, shift).sqrt();
        (Some(gap), Some(gap.value.abs() <= bound + 3.0 * gap.stderr + 1e-12))
    } else {
        (None, None)
    };
    Ok(WidthPropertiesReport {
        width,
        homogeneity_max_rel_err: rel,
        diameter_lower_ok: SQRT_2_OVER_PI * d <= width.mean + slack,
        diameter_upper_ok: width.mean <= (n as f64).sqrt() * d + slack,
        translation_gap,
        translation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_width_is_first_absolute_moment() {
        let u = vec![0.6, -0.8, 1.2];
        let set = SetSpec::finite(vec![u.clone()]).unwrap();
        let w = width_estimate(&set, 40_000, 1).unwrap();
        let target = SQRT_2_OVER_PI * dot(&u, &u).sqrt();
        assert!((w.mean - target).abs() <= 3.0 * w.stderr, "{w:?} vs {target}");
    }

    #[test]
    fn disc_width() {
        // E‖g‖ for g in R² is √2 Γ(3/2)/Γ(1) = √(π/2)
        let w = width_estimate(&SetSpec::ball(2, 1.0).unwrap(), 40_000, 2).unwrap();
        let target = (std::f64::consts::PI / 2.0).sqrt();
        assert!((w.mean - target).abs() <= 3.0 * w.stderr, "{w:?}");
    }

    #[test]
    fn sparse_width_scales_like_k_log() {
        for (n, k) in [(64, 2), (256, 4), (512, 8)] {
            let w = width_estimate(&SetSpec::sparse(n, k, 1.0).unwrap(), 2000, 3).unwrap();
            let ratio = w.mean * w.mean / (k as f64 * (2.0 * n as f64 / k as f64).ln());
            assert!(ratio < 3.0, "N={n} K={k} ratio={ratio}");
        }
    }

    #[test]
    fn rejects_too_few_draws() {
        assert!(width_estimate(&SetSpec::ball(2, 1.0).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn properties_hold_on_builtin_sets() {
        let sets = [
            SetSpec::finite(vec![vec![1.0, 0.5, 0.0], vec![-0.2, 0.3, 0.9]]).unwrap(),
            SetSpec::sparse(3, 2, 1.0).unwrap(),
            SetSpec::low_rank(3, 1, 1, 0.7).unwrap(),
            SetSpec::ball(3, 2.0).unwrap(),
        ];
        for s in &sets {
            for lambda in [1.0, 2.5] {
                let r = width_properties_check(s, lambda, &[0.3, -0.1, 0.2], 5000, 4).unwrap();
                assert!(r.all_ok(), "{s:?} {r:?}");
            }
        }
        let zero = width_properties_check(&sets[0], 1.0, &[0.0; 3], 500, 5).unwrap();
        assert_eq!(zero.translation_gap.unwrap().value, 0.0);
        assert_eq!(zero.homogeneity_max_rel_err, 0.0);
    }
}
