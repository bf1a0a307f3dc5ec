use crate::error::{Error, Result};
use crate::stats::norm_inf;
#[cfg(test)]
use crate::stats::norm2;

/// Anti-sparsity level `‖u‖² / ‖u‖_∞²` against a threshold `K0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiSparsityReport {
    pub level: f64,
    pub k0: f64,
    pub passed: bool,
}

pub fn anti_sparsity(u: &[f64], k0: f64) -> Result<AntiSparsityReport> {
    let inf = norm_inf(u);
    if inf == 0.0 {
        return Err(Error::invalid("anti-sparsity of the zero vector is undefined"));
    }
    let level = u.iter().map(|x| (x / inf).powi(2)).sum::<f64>();
    Ok(AntiSparsityReport { level, k0, passed: level >= k0 })
}

/// Orthonormal DCT-II matrix, row-major, row `k` being frequency `k`.
pub fn dct_matrix(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut m = vec![0.0; n * n];
    for k in 0..n {
        let s = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        for j in 0..n {
            m[k * n + j] = s * (std::f64::consts::PI * (j as f64 + 0.5) * k as f64 / nf).cos();
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    pub v: Vec<f64>,
    pub level_before: f64,
    pub level_after: f64,
}

/// `v = Ψ₀ u` with `Ψ₀` the orthonormal DCT-II. The level is not guaranteed
/// to increase; it typically does for sparse `u`.
pub fn rotate_antisparsify(u: &[f64]) -> Result<Rotation> {
    let before = anti_sparsity(u, 1.0)?.level;
    let n = u.len();
    let d = dct_matrix(n);
    let v: Vec<f64> = (0..n).map(|k| d[k * n..(k + 1) * n].iter().zip(u).map(|(a, b)| a * b).sum()).collect();
    let after = anti_sparsity(&v, 1.0)?.level;
    Ok(Rotation { v, level_before: before, level_after: after })
}
