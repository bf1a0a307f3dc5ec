use rand::Rng as _;
use rayon::prelude::*;

use crate::distances::{soft_count_1d, threshold_count};
use crate::ensembles::{mu_sg, sample_matrix, Ensemble};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{anti_sparsity, SetSpec};
use crate::quantizer::{QuantizedMap, QuantizerConfig};
use crate::rng;
use crate::stats::{norm2, sub, Estimate, Moments};

/// `(1 + √7)/2`: the factor on `√M‖R‖` that the uniform diameter bound
/// supports once the lifted vector is normalized by its own norm.
pub const DIAMETER_FACTOR: f64 = 1.822_875_655_532_295;

const DIAMETER_POINTS: usize = 64;
const CHERNOFF_P_SAMPLES: usize = 200_000;
const MU_SAMPLES: usize = 400_000;

/// Mean of `D^t(x, y)` over fresh `(Φ, ξ)` per trial, one entry per `t`.
fn soft_means(
    ensemble: &Ensemble,
    x: &[f64],
    y: &[f64],
    delta: f64,
    m: usize,
    t_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    check_dim(x.len(), y.len())?;
    if trials < 2 || m == 0 {
        return Err(Error::invalid("need at least 2 trials and m >= 1"));
    }
    let quantizer = QuantizerConfig::floor(delta)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let map = QuantizedMap::sample(ensemble, m, x.len(), quantizer, true, rng::derive_seed(seed, &[j as u64]))?;
            t_grid.iter().map(|&t| Ok(threshold_count(&map, x, y, t)?.value())).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..t_grid.len()).map(|k| Moments::from_iter(per_trial.iter().map(|v| v[k])).estimate()).collect())
}

/// Mean pseudo-distance over fresh maps, to be compared with `μ_sg(x − y)`.
pub fn expectation_identity(
    ensemble: &Ensemble,
    x: &[f64],
    y: &[f64],
    delta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<Estimate> {
    Ok(soft_means(ensemble, x, y, delta, m, &[0.0], trials, seed)?[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport {
    pub mu: Estimate,
    /// `(t, mean D^t)` pairs.
    pub means: Vec<(f64, Estimate)>,
    /// `max_{t ≠ 0} |mean D^t − μ| / |t|`.
    pub fitted_c: f64,
    /// `|mean D^0 − μ|` within three combined standard errors.
    pub t0_ok: bool,
}

pub fn expectation_check(
    ensemble: &Ensemble,
    x: &[f64],
    y: &[f64],
    delta: f64,
    m: usize,
    t_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<ExpectationReport> {
    let diff = sub(x, y);
    let mu = mu_sg(ensemble, &diff, MU_SAMPLES, rng::derive_seed(seed, &[u64::MAX]))?;
    let grid: Vec<f64> = if t_grid.contains(&0.0) { t_grid.to_vec() } else { [&[0.0], t_grid].concat() };
    let est = soft_means(ensemble, x, y, delta, m, &grid, trials, seed)?;
    let means: Vec<(f64, Estimate)> = grid.iter().copied().zip(est).collect();
    let fitted_c = means
        .iter()
        .filter(|(t, _)| *t != 0.0)
        .map(|(t, e)| (e.value - mu.value).abs() / t.abs())
        .fold(0.0, f64::max);
    let e0 = means.iter().find(|(t, _)| *t == 0.0).expect("grid contains 0").1;
    let t0_ok = (e0.value - mu.value).abs() <= 3.0 * e0.stderr.hypot(mu.stderr) + 1e-12;
    Ok(ExpectationReport { mu, means, fitted_c, t0_ok })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiameterReport {
    pub trials: usize,
    /// Trials with some `‖Φx‖ > factor · √M η`.
    pub failures: usize,
    /// Trials failing the unit-factor form `‖Φx‖ ≤ √M η`.
    pub failures_unit_factor: usize,
    pub factor: f64,
    pub failure_rate: f64,
    /// Largest `‖Φx‖ / (√M η)` seen.
    pub max_ratio: f64,
    /// Pass/fail per trial under `factor`.
    pub pattern: Vec<bool>,
    /// `c` with `rate = exp(−c α⁻⁴ M)`, using `1/trials` when no trial failed.
    pub fitted_c: f64,
}

/// Draws points of `(K − K) ∩ ηB^N` and checks `‖Φx‖ ≤ factor · √M η` per trial.
pub fn diameter_check(
    set: &SetSpec,
    eta: f64,
    ensemble: &Ensemble,
    m: usize,
    trials: usize,
    seed: u64,
    factor: f64,
) -> Result<DiameterReport> {
    if !(eta > 0.0 && factor > 0.0) || trials == 0 {
        return Err(Error::invalid("eta and factor must be positive, trials at least 1"));
    }
    set.validate()?;
    let n = set.dim();
    let d = set.diameter();
    let scale = if d > 0.0 { eta / (2.0 * d) } else { 0.0 };
    let bound = (m as f64).sqrt() * eta;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|j| -> Result<(bool, bool, f64)> {
            let trial_seed = rng::derive_seed(seed, &[j as u64]);
            let phi = sample_matrix(ensemble, m, n, rng::derive_seed(trial_seed, &[0]))?;
            let mut r = rng::rng_at(trial_seed, &[1]);
            let mut worst = 0.0_f64;
            for p in 0..DIAMETER_POINTS {
                let x: Vec<f64> = if p == 0 {
                    vec![0.0; n]
                } else {
                    let (a, b) = (set.sample_point(&mut r), set.sample_point(&mut r));
                    sub(&a, &b).iter().map(|v| v * scale).collect()
                };
                worst = worst.max(norm2(&phi.project(&x)?) / bound);
            }
            Ok((worst <= factor, worst <= 1.0, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let pattern: Vec<bool> = outcomes.iter().map(|o| o.0).collect();
    let failures = pattern.iter().filter(|&&ok| !ok).count();
    let failures_unit_factor = outcomes.iter().filter(|o| !o.1).count();
    let failure_rate = failures as f64 / trials as f64;
    let alpha4 = ensemble.alpha.powi(4);
    let fitted_c = -(failure_rate.max(1.0 / trials as f64)).ln() * alpha4 / m as f64;
    Ok(DiameterReport {
        trials,
        failures,
        failures_unit_factor,
        factor,
        failure_rate,
        max_ratio: outcomes.iter().map(|o| o.2).fold(0.0, f64::max),
        pattern,
        fitted_c,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffReport {
    /// `P[d^t(φᵀu + ξ, φᵀv + ξ) ≠ 0]`.
    pub p_hat: Estimate,
    pub r: u64,
    /// Empirical `P[D^t(u, v) ≤ δ r / M]` over fresh maps.
    pub left: Estimate,
    pub chernoff: f64,
    /// `r > M p̂`: the bound says nothing.
    pub vacuous: bool,
    pub chernoff_ok: bool,
    /// `‖u − v‖/(16(δ + ε₀)) − 2t/(δ + ε₀)`.
    pub p_lower_bound: f64,
    /// `Err(reason)` when the lower bound was not asserted.
    pub p_lower_ok: Result<bool, String>,
}

impl ChernoffReport {
    pub fn holds(&self) -> bool {
        self.chernoff_ok && self.p_lower_ok.clone().unwrap_or(true)
    }
}

/// Chernoff-type lower tail of `D^t` and the lower bound on the per-row
/// separation probability. `r = None` picks `⌈M p̂ / 2⌉`.
#[allow(clippy::too_many_arguments)]
pub fn chernoff_check(
    u: &[f64],
    v: &[f64],
    k0: f64,
    t: f64,
    ensemble: &Ensemble,
    delta: f64,
    m: usize,
    r: Option<u64>,
    trials: usize,
    seed: u64,
    eps0: f64,
) -> Result<ChernoffReport> {
    check_dim(u.len(), v.len())?;
    if !(t >= 0.0 && delta > 0.0) || m == 0 || trials < 2 {
        return Err(Error::invalid("need t >= 0, delta > 0, m >= 1 and at least 2 trials"));
    }
    let diff = sub(u, v);
    let dist = norm2(&diff);
    if dist > 0.0 && !anti_sparsity(&diff, k0)?.passed {
        return Err(Error::PreconditionFailed(format!("u - v is not anti-sparse at level {k0}")));
    }
    let n = u.len();
    let parts = rng::map_chunks(CHERNOFF_P_SAMPLES, rng::derive_seed(seed, &[0]), |rg, count| -> Result<Moments> {
        let mut mo = Moments::default();
        for _ in 0..count {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..n {
                let phi = ensemble.sample(rg);
                a += phi * u[j];
                b += phi * v[j];
            }
            let xi = rg.random::<f64>() * delta;
            mo.push(if soft_count_1d(a + xi, b + xi, t, delta)? != 0 { 1.0 } else { 0.0 });
        }
        Ok(mo)
    });
    let mut acc = Moments::default();
    for p in parts {
        acc = acc.merge(p?);
    }
    let p_hat = acc.estimate();
    let mp = m as f64 * p_hat.value;
    let r = r.unwrap_or((mp / 2.0).ceil() as u64);
    let vacuous = r as f64 > mp;
    let chernoff = if vacuous || mp == 0.0 { 1.0 } else { (-(mp - r as f64).powi(2) / (2.0 * mp)).exp() };
    let quantizer = QuantizerConfig::floor(delta)?;
    let hits = (0..trials)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let map = QuantizedMap::sample(ensemble, m, n, quantizer, true, rng::derive_seed(seed, &[1, j as u64]))?;
            let total: u64 = threshold_count(&map, u, v, t)?.per_coordinate.iter().sum();
            Ok(if total <= r { 1.0 } else { 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let left = Moments::from_iter(hits).estimate();
    let chernoff_ok = left.value <= chernoff + 3.0 * left.stderr + 1e-12;
    let p_lower_bound = dist / (16.0 * (delta + eps0)) - 2.0 * t / (delta + eps0);
    let p_lower_ok = if k0.sqrt() < 16.0 * ensemble.kappa_sg {
        Err(format!("sqrt(k0) < 16 kappa_sg = {}", 16.0 * ensemble.kappa_sg))
    } else if p_hat.value == 0.0 {
        Err("p_hat is zero".to_string())
    } else if dist > eps0 {
        Err(format!("|u - v| = {dist} exceeds eps0 = {eps0}"))
    } else {
        Ok(p_hat.value + 3.0 * p_hat.stderr >= p_lower_bound)
    };
    Ok(ChernoffReport { p_hat, r, left, chernoff, vacuous, chernoff_ok, p_lower_bound, p_lower_ok })
}
