use crate::ensembles::{binomial_mad, mu_sg_exact_binomial};
use crate::error::{Error, Result};
use crate::SQRT_2_OVER_PI;

/// `C` in `√(2/π)σ_n − M_n ≥ C σ_n / n`.
pub const MAD_GAP_CONSTANT: f64 = 1.0 / 7.0;

/// `M_{2n} = n 4⁻ⁿ C(2n, n)`, with `4⁻ⁿ C(2n, n) = ∏_{i≤n} (2i − 1)/(2i)`.
pub fn de_moivre_mad(k0_even: usize) -> Result<f64> {
    if k0_even < 2 || k0_even % 2 != 0 {
        return Err(Error::invalid(format!("De Moivre form needs an even k0 >= 2, got {k0_even}")));
    }
    let n = k0_even / 2;
    let central: f64 = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * i) as f64).product();
    Ok(n as f64 * central)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialMadReport {
    pub n: usize,
    /// `E|β − n/2|` by enumeration.
    pub mad: f64,
    pub mad_de_moivre: f64,
    pub sigma: f64,
    /// `√(2/π)σ − M_n`.
    pub gap: f64,
    /// `C σ / n`.
    pub bound: f64,
    /// `μ_sg(1_{k0}) = 2 M_n`.
    pub mu_sg: f64,
    /// `|μ_sg − √(2/π)√k0|`.
    pub distortion: f64,
    /// `C √k0 / k0`, the distortion floor implied by the gap bound.
    pub distortion_floor: f64,
    /// `2C √k0 / k0`, which the gap bound does not imply.
    pub distortion_floor_doubled: f64,
}

impl BinomialMadReport {
    pub fn gap_holds(&self) -> bool {
        self.gap >= self.bound
    }

    pub fn distortion_holds(&self) -> bool {
        self.distortion >= self.distortion_floor
    }

    pub fn forms_agree(&self, tol: f64) -> bool {
        (self.mad - self.mad_de_moivre).abs() <= tol
    }
}

pub fn bernoulli_floor_distortion(k0_even: usize) -> Result<BinomialMadReport> {
    let mad_de_moivre = de_moivre_mad(k0_even)?;
    let n = k0_even;
    let nf = n as f64;
    let mad = binomial_mad(n);
    let sigma = nf.sqrt() / 2.0;
    let mu = mu_sg_exact_binomial(n)?;
    Ok(BinomialMadReport {
        n,
        mad,
        mad_de_moivre,
        sigma,
        gap: SQRT_2_OVER_PI * sigma - mad,
        bound: MAD_GAP_CONSTANT * sigma / nf,
        mu_sg: mu,
        distortion: (mu - SQRT_2_OVER_PI * nf.sqrt()).abs(),
        distortion_floor: MAD_GAP_CONSTANT * nf.sqrt() / nf,
        distortion_floor_doubled: 2.0 * MAD_GAP_CONSTANT * nf.sqrt() / nf,
    })
}

/// `ln n! − (n ln n − n)` for `n = 0..=n_max`, accumulated from the exact
/// increments `1 − (n−1) ln(1 + 1/(n−1))` with compensated summation.
pub fn stirling_remainder(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0.0);
    if n_max >= 1 {
        // ln 1! − (0 − 1)
        out.push(1.0);
    }
    let (mut sum, mut comp) = (1.0_f64, 0.0_f64);
    for n in 2..=n_max {
        let x = 1.0 / (n - 1) as f64;
        let inc = if x < 0.01 {
            // 1 − ln(1+x)/x = x/2 − x²/3 + x³/4 − …
            x * (1..=12).rev().fold(0.0, |acc, j| 1.0 / (j + 1) as f64 - x * acc)
        } else {
            1.0 - x.ln_1p() / x
        };
        let y = inc - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        out.push(sum);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StirlingReport {
    pub n_max: usize,
    /// `n` where the sandwich failed.
    pub failures: Vec<usize>,
    /// Smallest `ln n! − lower` over the range.
    pub min_lower_margin: f64,
    /// Smallest `upper − ln n!` over the range.
    pub min_upper_margin: f64,
}

impl StirlingReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `n^n e^{-n} √(2π(n + 1/6)) ≤ n! ≤ n^n e^{-n} √(2π(n + 1/5))`, compared in
/// log space after cancelling the common `n ln n − n`.
pub fn stirling_gosper_check(n_max: usize) -> Result<StirlingReport> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let rem = stirling_remainder(n_max);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut failures = Vec::new();
    let (mut lo_m, mut up_m) = (f64::INFINITY, f64::INFINITY);
    for (n, &r) in rem.iter().enumerate().skip(1) {
        let nf = n as f64;
        let lower = 0.5 * (two_pi * (nf + 1.0 / 6.0)).ln();
        let upper = 0.5 * (two_pi * (nf + 0.2)).ln();
        lo_m = lo_m.min(r - lower);
        up_m = up_m.min(upper - r);
        if !(lower <= r && r <= upper) {
            failures.push(n);
        }
    }
    Ok(StirlingReport { n_max, failures, min_lower_margin: lo_m, min_upper_margin: up_m })
}
