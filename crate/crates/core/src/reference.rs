//! Slow, literal oracles used to cross-check the closed forms.

use crate::error::{Error, Result};

/// Counts `k` with `F^t(a − kδ, b − kδ)` by scanning a window wide enough to
/// contain every solution.
pub fn soft_count_enumerate(a: f64, b: f64, t: f64, delta: f64) -> u64 {
    let pad = (t.abs() / delta).ceil() as i64 + 2;
    let lo = (a.min(b) / delta).floor() as i64 - pad;
    let hi = (a.max(b) / delta).ceil() as i64 + pad;
    (lo..=hi)
        .filter(|&k| {
            let (ak, bk) = (a - k as f64 * delta, b - k as f64 * delta);
            (ak > t && bk <= -t) || (ak < -t && bk >= t)
        })
        .count() as u64
}

/// `∫₀¹ |⌊x+ξ⌋ − ⌊y+ξ⌋| dξ` summed over the pieces on which both floors are constant.
pub fn dithered_floor_integral(x: f64, y: f64) -> f64 {
    let mut cuts = vec![0.0, 1.0];
    for v in [x, y] {
        let c = v.ceil() - v;
        if c > 0.0 && c < 1.0 {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[1] - w[0]) * ((x + mid).floor() - (y + mid).floor()).abs()
        })
        .sum()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `radius · max_{|S| = k} ‖c_S‖` over every support, `c` the coefficients of `g`.
pub fn sparse_sup_enumerate(coeffs: &[f64], k: usize, radius: f64) -> f64 {
    subsets(coeffs.len(), k)
        .iter()
        .map(|s| s.iter().map(|&i| coeffs[i] * coeffs[i]).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        * radius
}

/// `E|β − n/2|` for `β ~ Bin(n, 1/2)` as the exact rational `num / 2^(n+1)`.
pub fn binomial_mad_rational(n: u32) -> Result<(u128, u32)> {
    if n == 0 || n > 120 {
        return Err(Error::invalid("exact binomial enumeration supports 1 <= n <= 120"));
    }
    let mut c: u128 = 1;
    let mut num: u128 = 0;
    for b in 0..=n as u128 {
        if b > 0 {
            c = c * (n as u128 - b + 1) / b;
        }
        // |2b − n| / 2 scaled by 2 to stay integral
        num += c * (2 * b).abs_diff(n as u128);
    }
    Ok((num, n + 1))
}

/// `E|β − n/2|` from [`binomial_mad_rational`].
pub fn binomial_mad_enumerate(n: u32) -> Result<f64> {
    let (num, shift) = binomial_mad_rational(n)?;
    Ok(num as f64 / 2f64.powi(shift as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerated_soft_counts() {
        assert_eq!(soft_count_enumerate(0.2, 2.7, 0.0, 1.0), 2);
        assert_eq!(soft_count_enumerate(0.9, 1.1, 0.3, 1.0), 0);
        assert_eq!(soft_count_enumerate(0.9, 1.1, -0.3, 1.0), 1);
    }

    #[test]
    fn floor_integral_cases() {
        assert!((dithered_floor_integral(0.3, 1.7) - 1.4).abs() < 1e-12);
        assert!((dithered_floor_integral(-2.6, 0.4) - 3.0).abs() < 1e-12);
        assert_eq!(dithered_floor_integral(1.25, 1.25), 0.0);
        assert!((dithered_floor_integral(2.0, -1.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(6, 2).len(), 15);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn small_binomial_mads() {
        assert_eq!(binomial_mad_enumerate(1).unwrap(), 0.5);
        assert_eq!(binomial_mad_enumerate(2).unwrap(), 0.5);
        assert_eq!(binomial_mad_enumerate(4).unwrap(), 0.75);
        assert!(binomial_mad_enumerate(0).is_err());
    }
}
