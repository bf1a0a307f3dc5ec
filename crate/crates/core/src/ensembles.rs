//! Symmetric, unit-variance sub-Gaussian ensembles and the sensing matrices
//! drawn from them.
//!
//! Each [`Ensemble`] carries its ψ2 norm `alpha` and a Berry–Esseen constant
//! `kappa_sg` bounding the integrated tail gap between a projection `⟨φ, u⟩`
//! and its Gaussian counterpart, relative to `‖u‖_∞`.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_dim, Error, Result};
use crate::rng::{self, Rng};
use crate::stats::{norm2, norm_inf, Estimate, Moments};
use crate::SQRT_2_OVER_PI;

/// Largest moment order used when evaluating the ψ2 norm.
pub const PSI2_P_MAX: usize = 64;

/// `9√27`, the generic Berry–Esseen factor multiplying `alpha³`.
pub const GENERIC_KAPPA_FACTOR: f64 = 46.765_371_804_359_7;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Gaussian,
    /// Uniform on `{-1, +1}`.
    Rademacher,
    /// Uniform on `[-√3, √3]`.
    BoundedUniform,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Rademacher => "rademacher",
            EnsembleKind::BoundedUniform => "uniform",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(EnsembleKind::Gaussian),
            "rademacher" | "bernoulli" => Ok(EnsembleKind::Rademacher),
            "uniform" | "bounded-uniform" | "boundeduniform" => Ok(EnsembleKind::BoundedUniform),
            other => Err(Error::invalid(format!("unknown ensemble '{other}'"))),
        }
    }

    /// Closed-form `E|X|^p`.
    pub fn abs_moment(self, p: usize) -> f64 {
        let p = p as f64;
        match self {
            EnsembleKind::Gaussian => {
                (0.5 * p * std::f64::consts::LN_2 + ln_gamma((p + 1.0) / 2.0)
                    - 0.5 * std::f64::consts::PI.ln())
                .exp()
            }
            EnsembleKind::Rademacher => 1.0,
            EnsembleKind::BoundedUniform => SQRT_3.powf(p) / (p + 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaSource {
    ExactZero,
    GenericBound,
    Estimated,
}

impl KappaSource {
    pub fn name(self) -> &'static str {
        match self {
            KappaSource::ExactZero => "exact-zero",
            KappaSource::GenericBound => "generic-bound",
            KappaSource::Estimated => "estimated",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "exact-zero" => Ok(KappaSource::ExactZero),
            "generic-bound" | "generic" => Ok(KappaSource::GenericBound),
            "estimated" => Ok(KappaSource::Estimated),
            other => Err(Error::invalid(format!("unknown kappa source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    pub kind: EnsembleKind,
    pub alpha: f64,
    pub kappa_sg: f64,
    pub kappa_source: KappaSource,
}

impl Ensemble {
    /// Ensemble with the default constants: `kappa_sg = 0` for Gaussian
    /// entries, the generic bound `9√27·alpha³` otherwise.
    pub fn new(kind: EnsembleKind) -> Self {
        let alpha = psi2_norm(kind, PSI2_P_MAX).expect("p_max is positive");
        let (kappa_sg, kappa_source) = match kind {
            EnsembleKind::Gaussian => (0.0, KappaSource::ExactZero),
            _ => (GENERIC_KAPPA_FACTOR * alpha.powi(3), KappaSource::GenericBound),
        };
        Ensemble { kind, alpha, kappa_sg, kappa_source }
    }

    pub fn gaussian() -> Self {
        Self::new(EnsembleKind::Gaussian)
    }

    pub fn rademacher() -> Self {
        Self::new(EnsembleKind::Rademacher)
    }

    pub fn bounded_uniform() -> Self {
        Self::new(EnsembleKind::BoundedUniform)
    }

    /// Replaces `kappa_sg` by a numerical estimate: the largest ratio
    /// `gap(u) / ‖u‖_∞` over flat unit vectors `u = 1_k / √k`, `k = 1..=max_support`.
    /// Gaussian ensembles keep their exact zero.
    pub fn with_estimated_kappa(self, max_support: usize, samples: usize, seed: u64) -> Result<Self> {
        if self.kind == EnsembleKind::Gaussian {
            return Ok(self);
        }
        if max_support == 0 {
            return Err(Error::invalid("max_support must be at least 1"));
        }
        let mut worst = 0.0_f64;
        for k in 1..=max_support {
            let u = vec![1.0 / (k as f64).sqrt(); k];
            let gap = berry_esseen_gap(&self, &u, samples, rng::derive_seed(seed, &[k as u64]))?;
            worst = worst.max((gap.value + 3.0 * gap.stderr) / norm_inf(&u));
        }
        Ok(Ensemble { kappa_sg: worst, kappa_source: KappaSource::Estimated, ..self })
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match self.kind {
            EnsembleKind::Gaussian => StandardNormal.sample(rng),
            EnsembleKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EnsembleKind::BoundedUniform => rng.random_range(-SQRT_3..SQRT_3),
        }
    }

    pub fn fill(&self, rng: &mut Rng, out: &mut [f64]) {
        for v in out {
            *v = self.sample(rng);
        }
    }

    /// Draws `⟨φ, u⟩` for a fresh row `φ`.
    pub fn sample_projection(&self, rng: &mut Rng, u: &[f64]) -> f64 {
        u.iter().map(|&ui| if ui == 0.0 { 0.0 } else { self.sample(rng) * ui }).sum()
    }
}

/// An `M × N` matrix of i.i.d. ensemble draws, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    pub ensemble: Ensemble,
    pub seed: u64,
}

impl SensingMatrix {
    /// Wraps explicit entries; `entries.len()` must equal `rows * cols`.
    pub fn from_entries(ensemble: Ensemble, rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        check_dim(rows * cols, entries.len())?;
        Ok(SensingMatrix { rows, cols, entries, ensemble, seed: 0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `Φx`. Zero entries of `x` are skipped, so sparse inputs cost `O(M·nnz)`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.cols, x.len())?;
        let support: Vec<(usize, f64)> =
            x.iter().copied().enumerate().filter(|&(_, v)| v != 0.0).collect();
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                support.iter().map(|&(j, v)| row[j] * v).sum()
            })
            .collect())
    }
}

/// Samples an `m × n` sensing matrix. Row `i` is drawn from its own stream
/// derived from `(seed, i)`, so the result is reproducible bit-for-bit.
pub fn sample_matrix(ensemble: &Ensemble, m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!("matrix dimensions must be positive, got {m}x{n}")));
    }
    let mut entries = vec![0.0; m * n];
    entries.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let mut r = rng::rng_at(seed, &[i as u64]);
        ensemble.fill(&mut r, row);
    });
    Ok(SensingMatrix { rows: m, cols: n, entries, ensemble: *ensemble, seed })
}

/// ψ2 norm `sup_p p^{-1/2} (E|X|^p)^{1/p}` over the integer grid `p = 1..=p_max`,
/// using closed-form absolute moments.
pub fn psi2_norm(kind: EnsembleKind, p_max: usize) -> Result<f64> {
    if p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    Ok((1..=p_max)
        .map(|p| {
            let pf = p as f64;
            kind.abs_moment(p).powf(1.0 / pf) / pf.sqrt()
        })
        .fold(0.0, f64::max))
}

/// First absolute moment `μ_sg(u) = E|⟨φ, u⟩|`. Exact for Gaussian rows.
pub fn mu_sg(ensemble: &Ensemble, u: &[f64], samples: usize, seed: u64) -> Result<Estimate> {
    let norm = norm2(u);
    if norm == 0.0 {
        return Err(Error::invalid("mu_sg needs a nonzero vector"));
    }
    if ensemble.kind == EnsembleKind::Gaussian {
        return Ok(Estimate::exact(SQRT_2_OVER_PI * norm));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be positive"));
    }
    let parts = rng::map_chunks(samples, seed, |r, n| {
        let mut m = Moments::default();
        for _ in 0..n {
            m.push(ensemble.sample_projection(r, u).abs());
        }
        m
    });
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge).estimate())
}

/// Exact `E|Σ_{j≤k0} φ_j|` for Rademacher `φ`, i.e. twice the mean absolute
/// deviation of `Bin(k0, 1/2)`.
pub fn mu_sg_exact_binomial(k0: usize) -> Result<f64> {
    if k0 == 0 {
        return Err(Error::invalid("k0 must be at least 1"));
    }
    Ok(2.0 * binomial_mad(k0))
}

/// `E|β − n/2|` for `β ~ Bin(n, 1/2)`, by enumeration of the binomial law.
/// Integer arithmetic up to `n = 100`, log-space weights beyond.
pub fn binomial_mad(n: usize) -> f64 {
    if n <= 100 {
        // sum_b C(n,b) |2b - n|, then divide by 2^(n+1)
        let mut c: u128 = 1;
        let mut acc: u128 = 0;
        for b in 0..=n {
            acc += c * (2 * b as i64 - n as i64).unsigned_abs() as u128;
            c = c * (n - b) as u128 / (b + 1) as u128;
        }
        acc as f64 / 2f64.powi(n as i32 + 1)
    } else {
        let nf = n as f64;
        let ln_n_fact = ln_gamma(nf + 1.0);
        (0..=n)
            .map(|b| {
                let bf = b as f64;
                let lw = ln_n_fact - ln_gamma(bf + 1.0) - ln_gamma(nf - bf + 1.0) - nf * std::f64::consts::LN_2;
                lw.exp() * (bf - nf / 2.0).abs()
            })
            .sum()
    }
}

/// Integrated tail gap `∫₀^∞ |P(|⟨φ,u⟩| ≥ t) − P(|⟨g,u⟩| ≥ t)| dt` for a unit `u`.
///
/// The tail of `|⟨φ,u⟩|` is the empirical one from `samples` draws, split in
/// 16 batches for the standard error; the Gaussian tail `erfc(t/√2)` is
/// integrated in closed form between consecutive order statistics.
pub fn berry_esseen_gap(ensemble: &Ensemble, u: &[f64], samples: usize, seed: u64) -> Result<Estimate> {
    if (norm2(u) - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("berry_esseen_gap needs a unit vector"));
    }
    if ensemble.kind == EnsembleKind::Gaussian {
        return Ok(Estimate::exact(0.0));
    }
    const BATCHES: usize = 16;
    if samples < BATCHES {
        return Err(Error::invalid(format!("need at least {BATCHES} samples")));
    }
    let per = samples / BATCHES;
    let batches: Vec<Vec<f64>> = (0..BATCHES)
        .into_par_iter()
        .map(|b| {
            let mut r = rng::rng_at(seed, &[b as u64]);
            let mut z: Vec<f64> = (0..per).map(|_| ensemble.sample_projection(&mut r, u).abs()).collect();
            z.sort_by(f64::total_cmp);
            z
        })
        .collect();
    let batch_gaps = Moments::from_iter(batches.iter().map(|z| tail_gap_sorted(z)));
    let mut pooled: Vec<f64> = batches.concat();
    pooled.sort_by(f64::total_cmp);
    Ok(Estimate { value: tail_gap_sorted(&pooled), stderr: batch_gaps.estimate().stderr })
}

/// Antiderivative of `erfc(t/√2)`.
fn gauss_tail_primitive(t: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    t * erfc(t / std::f64::consts::SQRT_2) - SQRT_2_OVER_PI * (-0.5 * t * t).exp()
}

/// `∫_a^b |c − erfc(t/√2)| dt` for a constant level `c ∈ [0, 1]`, `0 ≤ a ≤ b`.
fn abs_gap_on(a: f64, b: f64, c: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let signed = |lo: f64, hi: f64| {
        let level = if c == 0.0 { 0.0 } else { c * (hi - lo) };
        level - (gauss_tail_primitive(hi) - gauss_tail_primitive(lo))
    };
    // crossing point of the decreasing Gaussian tail with level c
    let cross = if c <= 0.0 {
        f64::INFINITY
    } else if c >= 1.0 {
        0.0
    } else {
        std::f64::consts::SQRT_2 * erfc_inv(c)
    };
    if cross <= a || cross >= b {
        signed(a, b).abs()
    } else {
        signed(a, cross).abs() + signed(cross, b).abs()
    }
}

/// Tail gap for sorted absolute samples `z`.
fn tail_gap_sorted(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let mut total = abs_gap_on(0.0, z[0], 1.0);
    for k in 0..z.len() {
        let level = (z.len() - k - 1) as f64 / n;
        let hi = z.get(k + 1).copied().unwrap_or(f64::INFINITY);
        total += abs_gap_on(z[k], hi, level);
    }
    total
}

/// Fitted sub-Gaussian tail envelope `P(|X| > ε) ≤ prefactor · exp(−rate ε² / α²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub prefactor: f64,
    pub rate: f64,
    /// Largest observed `P̂(|X| > ε) − envelope(ε)` on the grid; `≤ 0` when the fit holds.
    pub max_excess: f64,
}

/// Fits the largest rate for a fixed prefactor `2` such that the empirical
/// tail stays below the envelope on `eps_grid`.
pub fn fit_tail_bound(ensemble: &Ensemble, eps_grid: &[f64], samples: usize, seed: u64) -> Result<TailFit> {
    if samples == 0 || eps_grid.is_empty() {
        return Err(Error::invalid("tail fit needs samples and a nonempty grid"));
    }
    const PREFACTOR: f64 = 2.0;
    let parts = rng::map_chunks(samples, seed, |r, n| {
        let mut counts = vec![0u64; eps_grid.len()];
        for _ in 0..n {
            let x = ensemble.sample(r).abs();
            for (c, &e) in counts.iter_mut().zip(eps_grid) {
                if x > e {
                    *c += 1;
                }
            }
        }
        counts
    });
    let mut counts = vec![0u64; eps_grid.len()];
    for p in parts {
        for (c, v) in counts.iter_mut().zip(p) {
            *c += v;
        }
    }
    let a2 = ensemble.alpha * ensemble.alpha;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let rate = eps_grid
        .iter()
        .zip(&probs)
        .filter(|&(&e, &p)| p > 0.0 && e > 0.0)
        .map(|(&e, &p)| -a2 * (p / PREFACTOR).ln() / (e * e))
        .fold(f64::INFINITY, f64::min);
    let rate = if rate.is_finite() { rate } else { 1.0 };
    let max_excess = eps_grid
        .iter()
        .zip(&probs)
        .map(|(&e, &p)| p - PREFACTOR * (-rate * e * e / a2).exp())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TailFit { prefactor: PREFACTOR, rate, max_excess })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_matrix_has_unit_entries() {
        let m = sample_matrix(&Ensemble::rademacher(), 2, 2, 11).unwrap();
        assert!(m.entries().iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(matches!(sample_matrix(&Ensemble::gaussian(), 0, 3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(sample_matrix(&Ensemble::gaussian(), 3, 0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn matrix_is_reproducible() {
        let e = Ensemble::bounded_uniform();
        assert_eq!(sample_matrix(&e, 5, 7, 42).unwrap(), sample_matrix(&e, 5, 7, 42).unwrap());
        assert_ne!(sample_matrix(&e, 5, 7, 42).unwrap(), sample_matrix(&e, 5, 7, 43).unwrap());
    }

    #[test]
    fn gaussian_rows_are_isotropic() {
        let n = 1000;
        let m = sample_matrix(&Ensemble::gaussian(), 1000, n, 5).unwrap();
        let stats = Moments::from_iter((0..m.rows()).map(|i| m.row(i).iter().map(|v| v * v).sum::<f64>() / n as f64));
        let e = stats.estimate();
        assert!(e.within(1.0, 3.0), "{e:?}");
    }

    #[test]
    fn bounded_uniform_has_unit_variance() {
        let m = sample_matrix(&Ensemble::bounded_uniform(), 1000, 1000, 9).unwrap();
        let sq = Moments::from_iter(m.entries().iter().map(|v| v * v));
        assert!(sq.estimate().within(1.0, 3.0), "{:?}", sq.estimate());
        let mean = Moments::from_iter(m.entries().iter().copied()).estimate();
        assert!(mean.within(0.0, 3.0));
    }

    #[test]
    fn psi2_norms_of_builtins() {
        assert_eq!(psi2_norm(EnsembleKind::Rademacher, 64).unwrap(), 1.0);
        assert!((psi2_norm(EnsembleKind::Gaussian, 64).unwrap() - SQRT_2_OVER_PI).abs() < 1e-12);
        assert!((psi2_norm(EnsembleKind::BoundedUniform, 64).unwrap() - SQRT_3 / 2.0).abs() < 1e-12);
        assert!(psi2_norm(EnsembleKind::Gaussian, 0).is_err());
        for kind in [EnsembleKind::Gaussian, EnsembleKind::Rademacher, EnsembleKind::BoundedUniform] {
            assert!(psi2_norm(kind, 64).unwrap() >= std::f64::consts::FRAC_1_SQRT_2);
        }
    }

    #[test]
    fn gaussian_moment_formula_matches_known_values() {
        // E|g| = √(2/π), E g² = 1, E|g|³ = 2√(2/π), E g⁴ = 3
        let g = EnsembleKind::Gaussian;
        assert!((g.abs_moment(1) - SQRT_2_OVER_PI).abs() < 1e-14);
        assert!((g.abs_moment(2) - 1.0).abs() < 1e-13);
        assert!((g.abs_moment(3) - 2.0 * SQRT_2_OVER_PI).abs() < 1e-13);
        assert!((g.abs_moment(4) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn default_kappa_constants() {
        assert_eq!(Ensemble::gaussian().kappa_sg, 0.0);
        let r = Ensemble::rademacher();
        assert_eq!(r.kappa_source, KappaSource::GenericBound);
        assert!(r.kappa_sg < 47.0 && r.kappa_sg > 46.0);
        let u = Ensemble::bounded_uniform();
        assert!(u.kappa_sg <= GENERIC_KAPPA_FACTOR * u.alpha.powi(3) + 1e-12);
    }

    #[test]
    fn mu_sg_values() {
        let u = [3.0, 4.0];
        let g = mu_sg(&Ensemble::gaussian(), &u, 10, 0).unwrap();
        assert_eq!(g.value, SQRT_2_OVER_PI * 5.0);
        assert_eq!(g.stderr, 0.0);
        let e1 = mu_sg(&Ensemble::rademacher(), &[1.0, 0.0, 0.0], 5000, 1).unwrap();
        assert_eq!(e1.value, 1.0);
        let pair = mu_sg(&Ensemble::rademacher(), &[1.0, 1.0], 40_000, 2).unwrap();
        assert!(pair.within(1.0, 3.0), "{pair:?}");
        assert!(mu_sg(&Ensemble::rademacher(), &[0.0, 0.0], 10, 0).is_err());
    }

    #[test]
    fn binomial_mu_small_cases() {
        assert_eq!(mu_sg_exact_binomial(1).unwrap(), 1.0);
        assert_eq!(mu_sg_exact_binomial(2).unwrap(), 1.0);
        assert_eq!(mu_sg_exact_binomial(4).unwrap(), 1.5);
        assert!(mu_sg_exact_binomial(0).is_err());
    }

    #[test]
    fn binomial_mad_paths_agree_at_switchover() {
        // log-space route vs integer route at n = 100, evaluated through the log path directly
        let n = 100usize;
        let nf = n as f64;
        let lf = ln_gamma(nf + 1.0);
        let logspace: f64 = (0..=n)
            .map(|b| {
                let bf = b as f64;
                (lf - ln_gamma(bf + 1.0) - ln_gamma(nf - bf + 1.0) - nf * std::f64::consts::LN_2).exp()
                    * (bf - nf / 2.0).abs()
            })
            .sum();
        assert!((logspace - binomial_mad(n)).abs() < 1e-9);
        assert!(binomial_mad(101) > binomial_mad(100));
    }

    #[test]
    fn berry_esseen_gap_for_single_rademacher_coordinate() {
        // oracle: trapezoid integration of |1[t<1] - erfc(t/√2)| on [0, 12]
        let f = |t: f64| ((if t < 1.0 { 1.0 } else { 0.0 }) - erfc(t / std::f64::consts::SQRT_2)).abs();
        let steps = 2_400_000;
        let h = 12.0 / steps as f64;
        let mut oracle = 0.5 * (f(0.0) + f(12.0));
        for i in 1..steps {
            oracle += f(i as f64 * h);
        }
        oracle *= h;
        let gap = berry_esseen_gap(&Ensemble::rademacher(), &[1.0, 0.0], 1600, 3).unwrap();
        assert!((gap.value - oracle).abs() < 1e-6, "{} vs {oracle}", gap.value);
        assert_eq!(gap.stderr, 0.0);
    }

    #[test]
    fn berry_esseen_gap_cases() {
        let g = berry_esseen_gap(&Ensemble::gaussian(), &[0.6, 0.8], 100, 0).unwrap();
        assert_eq!(g.value, 0.0);
        let k = 16;
        let u = vec![0.25; k];
        let r = Ensemble::rademacher();
        let gap = berry_esseen_gap(&r, &u, 32_000, 4).unwrap();
        assert!(gap.value <= r.kappa_sg * norm_inf(&u) + 3.0 * gap.stderr);
        assert!(gap.value <= 47.0 / 4.0 + 3.0 * gap.stderr);
        assert!(berry_esseen_gap(&r, &[1.0, 1.0], 100, 0).is_err());
    }

    #[test]
    fn estimated_kappa_is_below_generic_bound() {
        let r = Ensemble::rademacher().with_estimated_kappa(8, 16_000, 1).unwrap();
        assert_eq!(r.kappa_source, KappaSource::Estimated);
        assert!(r.kappa_sg > 0.0 && r.kappa_sg < Ensemble::rademacher().kappa_sg);
        assert_eq!(Ensemble::gaussian().with_estimated_kappa(8, 100, 1).unwrap(), Ensemble::gaussian());
    }

    #[test]
    fn tail_fit_holds_on_grid() {
        let grid: Vec<f64> = (1..=30).map(|i| i as f64 * 0.15).collect();
        for e in [Ensemble::gaussian(), Ensemble::rademacher(), Ensemble::bounded_uniform()] {
            let fit = fit_tail_bound(&e, &grid, 100_000, 6).unwrap();
            assert!(fit.rate > 0.1, "{:?} {fit:?}", e.kind);
            assert!(fit.max_excess <= 1e-12);
        }
    }
}
