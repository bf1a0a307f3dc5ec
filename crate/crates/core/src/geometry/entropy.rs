//! Kolmogorov entropy bounds, structured-set constants and greedy η-nets.

use super::{width_estimate, SetSpec};
use crate::error::{Error, Result};
use crate::stats::{norm2, sub};

/// Draws used when an entropy bound falls back on a Sudakov estimate.
const SUDAKOV_DRAWS: usize = 4000;

/// Upper bound on `log N(K, η)` with the default width estimate seed.
pub fn entropy_bound(set: &SetSpec, eta: f64) -> Result<f64> {
    entropy_bound_with(set, eta, SUDAKOV_DRAWS, 0)
}

/// Entropy bound:
/// - sparse ball: `K log(eN/K · (1 + 2d/η))` (union of per-support ball nets);
/// - finite set: `min(log |S|, w²/η²)`;
/// - otherwise the Sudakov form `w²/η²`.
///
/// Sudakov terms use an estimated width with unit constant.
pub fn entropy_bound_with(set: &SetSpec, eta: f64, draws: usize, seed: u64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::invalid("eta must be positive"));
    }
    let sudakov = || -> Result<f64> {
        let w = width_estimate(set, draws, seed)?.mean;
        Ok(w * w / (eta * eta))
    };
    match set {
        SetSpec::SparseBall { n, k, radius, .. } => {
            let (n, k) = (*n as f64, *k as f64);
            Ok(k * (std::f64::consts::E * n / k * (1.0 + 2.0 * radius / eta)).ln())
        }
        SetSpec::FiniteSet { points } => Ok((points.len() as f64).ln().min(sudakov()?)),
        _ => sudakov(),
    }
}

/// A diameter-free complexity bound `w̄(K)²` and the entropy table it must dominate.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredConstants {
    pub w_bar_sq_bound: f64,
    /// `(η, entropy_bound(η))` pairs.
    pub entropy_table: Vec<(f64, f64)>,
}

impl StructuredConstants {
    /// `w̄² = c·K log(2N/K)` for sparse balls, `c·r(N1 + N2)` for low-rank
    /// balls, `c·N` for Euclidean balls. Finite sets carry no such bound.
    pub fn for_set(set: &SetSpec, c_const: f64, eta_grid: &[f64]) -> Result<Self> {
        if !(c_const > 0.0) {
            return Err(Error::invalid("constant must be positive"));
        }
        let w_bar_sq_bound = c_const * Self::w_bar_sq_form(set)?;
        let entropy_table =
            eta_grid.iter().map(|&eta| Ok((eta, entropy_bound(set, eta)?))).collect::<Result<Vec<_>>>()?;
        Ok(StructuredConstants { w_bar_sq_bound, entropy_table })
    }

    /// The closed form of `w̄(K)²` without its constant.
    pub fn w_bar_sq_form(set: &SetSpec) -> Result<f64> {
        match set {
            SetSpec::SparseBall { n, k, .. } => Ok(*k as f64 * (2.0 * *n as f64 / *k as f64).ln()),
            SetSpec::LowRankBall { n1, n2, r, .. } => Ok((*r * (n1 + n2)) as f64),
            SetSpec::EuclideanBall { n, .. } => Ok(*n as f64),
            SetSpec::FiniteSet { .. } => Err(Error::invalid("finite sets have no structured bound")),
        }
    }

    /// Smallest multiplier `m` with `entropy(η) ≤ m · w̄² log(1 + d/η)` over the table.
    pub fn required_multiplier(&self, diameter: f64) -> f64 {
        self.entropy_table
            .iter()
            .map(|&(eta, h)| h / (self.w_bar_sq_bound * (1.0 + diameter / eta).ln()))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalNet {
    /// Indices into the input list.
    pub indices: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    pub log_size: f64,
    /// Largest distance from an input point to its nearest net point.
    pub cover_radius: f64,
}

/// Greedy farthest-point η-cover of a finite point list.
pub fn empirical_net(points: &[Vec<f64>], eta: f64) -> Result<EmpiricalNet> {
    if points.is_empty() {
        return Err(Error::invalid("empirical_net needs a nonempty point list"));
    }
    if !(eta >= 0.0) {
        return Err(Error::invalid("eta must be nonnegative"));
    }
    let mut indices = vec![0usize];
    let mut nearest: Vec<f64> = points.iter().map(|p| norm2(&sub(p, &points[0]))).collect();
    loop {
        let (far, dist) =
            nearest.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, d)| if d > b.1 { (i, d) } else { b });
        if dist <= eta {
            let net: Vec<Vec<f64>> = indices.iter().map(|&i| points[i].clone()).collect();
            return Ok(EmpiricalNet {
                log_size: (indices.len() as f64).ln(),
                indices,
                points: net,
                cover_radius: dist.max(0.0),
            });
        }
        indices.push(far);
        for (d, p) in nearest.iter_mut().zip(points) {
            *d = d.min(norm2(&sub(p, &points[far])));
        }
    }
}
