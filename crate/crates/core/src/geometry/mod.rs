//! Low-complexity sets: sampling, membership, exact support functions, and
//! the quantities derived from them (Gaussian mean width, entropy bounds,
//! anti-sparsity, measurement-count requirements).

mod antisparse;
mod entropy;
mod requirements;
mod width;

pub use antisparse::{anti_sparsity, dct_matrix, rotate_antisparsify, AntiSparsityReport, Rotation};
pub use entropy::{empirical_net, entropy_bound, entropy_bound_with, EmpiricalNet, StructuredConstants};
pub use requirements::{minimal_m, minimal_m_formula, RequirementKind};
pub use width::{width_estimate, width_properties_check, WidthEstimate, WidthPropertiesReport};

use nalgebra::DMatrix;
use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::rng::Rng;
use crate::stats::{dot, norm2};

/// Orthonormal basis of `R^N`, stored as an `N × N` row-major matrix whose
/// columns are the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    n: usize,
    entries: Vec<f64>,
    pub label: String,
}

impl OrthoBasis {
    /// Orthonormal DCT-II basis.
    pub fn dct(n: usize) -> Self {
        // dct_matrix rows are the analysis functions, so the synthesis basis is its transpose
        let d = dct_matrix(n);
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = d[j * n + i];
            }
        }
        OrthoBasis { n, entries, label: "dct".into() }
    }

    pub fn from_columns(n: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(n * n, entries.len())?;
        let m = DMatrix::from_row_slice(n, n, &entries);
        let gram = m.transpose() * &m;
        if (gram - DMatrix::<f64>::identity(n, n)).amax() > 1e-9 {
            return Err(Error::invalid("basis is not orthonormal"));
        }
        Ok(OrthoBasis { n, entries, label: "custom".into() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Ψ s`.
    pub fn synthesize(&self, s: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(&self.entries[i * self.n..(i + 1) * self.n], s)).collect()
    }

    /// `Ψᵀ x`.
    pub fn analyze(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                for (o, &p) in out.iter_mut().zip(&self.entries[i * self.n..(i + 1) * self.n]) {
                    *o += p * xi;
                }
            }
        }
        out
    }
}

/// A bounded low-complexity set `K`.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    FiniteSet { points: Vec<Vec<f64>> },
    /// `K`-sparse vectors (in `basis`, identity when absent) of norm at most `radius`.
    SparseBall { n: usize, k: usize, radius: f64, basis: Option<OrthoBasis> },
    /// `n1 × n2` matrices (row-major vectors) of rank at most `r`, Frobenius norm at most `radius`.
    LowRankBall { n1: usize, n2: usize, r: usize, radius: f64 },
    EuclideanBall { n: usize, radius: f64 },
}

const MEMBERSHIP_TOL: f64 = 1e-9;
/// Relative singular-value cutoff; Gram eigenvalues carry `√ε`-level noise.
const RANK_TOL: f64 = 1e-6;

impl SetSpec {
    pub fn sparse(n: usize, k: usize, radius: f64) -> Result<Self> {
        let s = SetSpec::SparseBall { n, k, radius, basis: None };
        s.validate()?;
        Ok(s)
    }

    pub fn low_rank(n1: usize, n2: usize, r: usize, radius: f64) -> Result<Self> {
        let s = SetSpec::LowRankBall { n1, n2, r, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        let s = SetSpec::EuclideanBall { n, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn finite(points: Vec<Vec<f64>>) -> Result<Self> {
        let s = SetSpec::FiniteSet { points };
        s.validate()?;
        Ok(s)
    }

    /// Grid points of spacing `spacing` inside the ball of radius `radius` in `R^n`.
    pub fn mesh(n: usize, spacing: f64, radius: f64) -> Result<Self> {
        if n == 0 || !(spacing > 0.0) || !(radius > 0.0) {
            return Err(Error::invalid("mesh needs n >= 1, spacing > 0, radius > 0"));
        }
        let steps = (radius / spacing).floor() as i64;
        let side = (2 * steps + 1) as usize;
        let total = side.checked_pow(n as u32).filter(|&t| t <= 2_000_000);
        let total = total.ok_or_else(|| Error::invalid("mesh too large"))?;
        let mut points = Vec::new();
        for idx in 0..total {
            let mut rem = idx;
            let p: Vec<f64> = (0..n)
                .map(|_| {
                    let c = (rem % side) as i64 - steps;
                    rem /= side;
                    c as f64 * spacing
                })
                .collect();
            if norm2(&p) <= radius + 1e-12 {
                points.push(p);
            }
        }
        Self::finite(points)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::FiniteSet { points } => {
                let first = points.first().ok_or_else(|| Error::invalid("finite set is empty"))?;
                if first.is_empty() {
                    return Err(Error::invalid("points must have positive dimension"));
                }
                for p in points {
                    check_dim(first.len(), p.len())?;
                    if p.iter().any(|v| !v.is_finite()) {
                        return Err(Error::invalid("points must be finite"));
                    }
                }
            }
            SetSpec::SparseBall { n, k, radius, basis } => {
                if *n == 0 || *k == 0 || k > n {
                    return Err(Error::invalid(format!("sparse ball needs 1 <= K <= N, got N={n}, K={k}")));
                }
                if let Some(b) = basis {
                    check_dim(*n, b.dim())?;
                }
                positive_radius(*radius)?;
            }
            SetSpec::LowRankBall { n1, n2, r, radius } => {
                if *n1 == 0 || *n2 == 0 || *r == 0 || *r > (*n1).min(*n2) {
                    return Err(Error::invalid(format!("low-rank ball needs 1 <= r <= min(N1, N2), got r={r}")));
                }
                positive_radius(*radius)?;
            }
            SetSpec::EuclideanBall { n, radius } => {
                if *n == 0 {
                    return Err(Error::invalid("ball dimension must be positive"));
                }
                positive_radius(*radius)?;
            }
        }
        Ok(())
    }

    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        match self {
            SetSpec::FiniteSet { points } => points[0].len(),
            SetSpec::SparseBall { n, .. } | SetSpec::EuclideanBall { n, .. } => *n,
            SetSpec::LowRankBall { n1, n2, .. } => n1 * n2,
        }
    }

    /// `‖K‖ = max_{u∈K} ‖u‖`.
    pub fn diameter(&self) -> f64 {
        match self {
            SetSpec::FiniteSet { points } => points.iter().map(|p| norm2(p)).fold(0.0, f64::max),
            SetSpec::SparseBall { radius, .. }
            | SetSpec::LowRankBall { radius, .. }
            | SetSpec::EuclideanBall { radius, .. } => *radius,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SetSpec::FiniteSet { .. })
    }

    /// `λK` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("scale must be positive"));
        }
        Ok(match self.clone() {
            SetSpec::FiniteSet { points } => SetSpec::FiniteSet {
                points: points.into_iter().map(|p| p.into_iter().map(|v| v * lambda).collect()).collect(),
            },
            SetSpec::SparseBall { n, k, radius, basis } => SetSpec::SparseBall { n, k, radius: radius * lambda, basis },
            SetSpec::LowRankBall { n1, n2, r, radius } => SetSpec::LowRankBall { n1, n2, r, radius: radius * lambda },
            SetSpec::EuclideanBall { n, radius } => SetSpec::EuclideanBall { n, radius: radius * lambda },
        })
    }

    /// `K + {shift}`; only finite sets stay representable.
    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        match self {
            SetSpec::FiniteSet { points } => {
                check_dim(self.dim(), shift.len())?;
                Ok(SetSpec::FiniteSet {
                    points: points.iter().map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect()).collect(),
                })
            }
            _ => Err(Error::invalid("only finite sets can be translated")),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let tol = MEMBERSHIP_TOL * self.diameter().max(1.0);
        match self {
            SetSpec::FiniteSet { points } => points.iter().any(|p| norm2(&crate::stats::sub(p, x)) <= tol),
            SetSpec::SparseBall { k, radius, basis, .. } => {
                let coeffs = basis.as_ref().map_or_else(|| x.to_vec(), |b| b.analyze(x));
                let nnz = coeffs.iter().filter(|c| c.abs() > tol).count();
                nnz <= *k && norm2(x) <= radius + tol
            }
            SetSpec::LowRankBall { n1, n2, r, radius } => {
                let sv = singular_values(*n1, *n2, x);
                let top = sv.first().copied().unwrap_or(0.0);
                let rank = sv.iter().filter(|&&s| s > RANK_TOL * top.max(1e-300)).count();
                rank <= *r && norm2(x) <= radius + tol
            }
            SetSpec::EuclideanBall { radius, .. } => norm2(x) <= radius + tol,
        }
    }

    /// Draws a point of the set.
    pub fn sample_point(&self, rng: &mut Rng) -> Vec<f64> {
        match self {
            SetSpec::FiniteSet { points } => points[rng.random_range(0..points.len())].clone(),
            SetSpec::SparseBall { n, k, radius, basis } => {
                let mut s = vec![0.0; *n];
                for j in index::sample(rng, *n, *k) {
                    s[j] = StandardNormal.sample(rng);
                }
                rescale(&mut s, radius * rng.random::<f64>());
                match basis {
                    Some(b) => b.synthesize(&s),
                    None => s,
                }
            }
            SetSpec::LowRankBall { n1, n2, r, radius } => {
                let a = DMatrix::<f64>::from_fn(*n1, *r, |_, _| StandardNormal.sample(rng));
                let b = DMatrix::<f64>::from_fn(*n2, *r, |_, _| StandardNormal.sample(rng));
                let mut x = row_major(&(a * b.transpose()));
                rescale(&mut x, radius * rng.random::<f64>());
                x
            }
            SetSpec::EuclideanBall { n, radius } => {
                let mut x: Vec<f64> = (0..*n).map(|_| StandardNormal.sample(rng)).collect();
                rescale(&mut x, radius * rng.random::<f64>().powf(1.0 / *n as f64));
                x
            }
        }
    }

    /// Exact `sup_{u∈K} |⟨g, u⟩|`.
    pub fn sup_oracle(&self, g: &[f64]) -> Result<f64> {
        check_dim(self.dim(), g.len())?;
        Ok(match self {
            SetSpec::FiniteSet { points } => points.iter().map(|p| dot(p, g).abs()).fold(0.0, f64::max),
            SetSpec::SparseBall { k, radius, basis, .. } => {
                let mut c: Vec<f64> = basis.as_ref().map_or_else(|| g.to_vec(), |b| b.analyze(g));
                c.iter_mut().for_each(|v| *v = v.abs());
                c.sort_unstable_by(|a, b| b.total_cmp(a));
                radius * norm2(&c[..*k])
            }
            SetSpec::LowRankBall { n1, n2, r, radius } => {
                let sv = singular_values(*n1, *n2, g);
                radius * sv.iter().take(*r).map(|s| s * s).sum::<f64>().sqrt()
            }
            SetSpec::EuclideanBall { radius, .. } => radius * norm2(g),
        })
    }

    /// A unit direction `u` such that `x + r u` stays in the set's model
    /// (same sparsity support, same rank) for small `r`. `None` for finite sets.
    pub fn admissible_direction(&self, x: &[f64], rng: &mut Rng) -> Option<Vec<f64>> {
        let mut u = match self {
            SetSpec::FiniteSet { .. } => return None,
            SetSpec::SparseBall { n, k, basis, .. } => {
                let coeffs = basis.as_ref().map_or_else(|| x.to_vec(), |b| b.analyze(x));
                let cut = MEMBERSHIP_TOL * coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
                let mut support: Vec<usize> = (0..*n).filter(|&i| coeffs[i].abs() > cut).collect();
                support.sort_by(|&a, &b| coeffs[b].abs().total_cmp(&coeffs[a].abs()));
                support.truncate(*k);
                if support.len() < *k {
                    let free: Vec<usize> = (0..*n).filter(|i| !support.contains(i)).collect();
                    let extra = index::sample(rng, free.len(), k - support.len());
                    support.extend(extra.into_iter().map(|j| free[j]));
                }
                let mut v = vec![0.0; *n];
                for &j in &support {
                    v[j] = StandardNormal.sample(rng);
                }
                match basis {
                    Some(b) => b.synthesize(&v),
                    None => v,
                }
            }
            SetSpec::LowRankBall { n1, n2, r, .. } => {
                let ur = leading_left_vectors(*n1, *n2, x, *r);
                let c = DMatrix::<f64>::from_fn(*n2, *r, |_, _| StandardNormal.sample(rng));
                row_major(&(ur * c.transpose()))
            }
            SetSpec::EuclideanBall { n, .. } => (0..*n).map(|_| StandardNormal.sample(rng)).collect(),
        };
        let norm = norm2(&u);
        if norm == 0.0 {
            return None;
        }
        u.iter_mut().for_each(|v| *v /= norm);
        Some(u)
    }

    /// Largest `r ≥ 0` with `‖x + r u‖ ≤ ‖K‖` for a unit `u` (ball-shaped sets).
    pub fn max_step(&self, x: &[f64], u: &[f64]) -> f64 {
        let d = self.diameter();
        let xu = dot(x, u);
        let disc = xu * xu - dot(x, x) + d * d;
        (-xu + disc.max(0.0).sqrt()).max(0.0)
    }

    /// Parses `kind:key=value,...`, e.g. `sparse:N=64,K=4,d=1`,
    /// `lowrank:N1=4,N2=4,r=1,d=2`, `ball:N=3,d=1`, `mesh:N=3,h=0.25,d=1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("set parameter '{part}' is not key=value")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| kv.remove(key);
        let num = |v: Option<String>, key: &str| -> Result<f64> {
            let v = v.ok_or_else(|| Error::Config(format!("set is missing '{key}'")))?;
            v.parse::<f64>().map_err(|_| Error::Config(format!("set parameter {key}='{v}' is not a number")))
        };
        let count = |v: Option<String>, key: &str| -> Result<usize> {
            let v = v.ok_or_else(|| Error::Config(format!("set is missing '{key}'")))?;
            v.parse::<usize>().map_err(|_| Error::Config(format!("set parameter {key}='{v}' is not a count")))
        };
        let radius = |v: Option<String>| v.map_or(Ok(1.0), |s| num(Some(s), "d"));
        let set = match kind.trim() {
            "sparse" => {
                let n = count(take("N"), "N")?;
                let k = count(take("K"), "K")?;
                let radius = radius(take("d"))?;
                let basis = match take("basis").as_deref() {
                    None | Some("identity") => None,
                    Some("dct") => Some(OrthoBasis::dct(n)),
                    Some(other) => return Err(Error::Config(format!("unknown basis '{other}'"))),
                };
                SetSpec::SparseBall { n, k, radius, basis }
            }
            "lowrank" => SetSpec::LowRankBall {
                n1: count(take("N1"), "N1")?,
                n2: count(take("N2"), "N2")?,
                r: count(take("r"), "r")?,
                radius: radius(take("d"))?,
            },
            "ball" => SetSpec::EuclideanBall { n: count(take("N"), "N")?, radius: radius(take("d"))? },
            "mesh" => {
                let n = count(take("N"), "N")?;
                let h = num(take("h"), "h")?;
                let d = radius(take("d"))?;
                Self::mesh(n, h, d)?
            }
            other => return Err(Error::Config(format!("unknown set kind '{other}'"))),
        };
        if let Some(extra) = kv.keys().next() {
            return Err(Error::Config(format!("unknown set parameter '{extra}'")));
        }
        set.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(set)
    }
}

fn positive_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("radius must be positive, got {r}")))
    }
}

fn rescale(x: &mut [f64], target: f64) {
    let n = norm2(x);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v *= target / n);
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Singular values of the row-major `n1 × n2` reshape of `x`, descending,
/// from the eigenvalues of the smaller Gram matrix.
fn singular_values(n1: usize, n2: usize, x: &[f64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n1, n2, x);
    let gram = if n1 <= n2 { &m * m.transpose() } else { m.transpose() * &m };
    let mut sv: Vec<f64> = gram.symmetric_eigenvalues().iter().map(|e| e.max(0.0).sqrt()).collect();
    sv.sort_unstable_by(|a, b| b.total_cmp(a));
    sv
}

/// Leading `r` left singular vectors as an `n1 × r` matrix.
fn leading_left_vectors(n1: usize, n2: usize, x: &[f64], r: usize) -> DMatrix<f64> {
    let m = DMatrix::from_row_slice(n1, n2, x);
    let eig = (&m * m.transpose()).symmetric_eigen();
    let mut order: Vec<usize> = (0..n1).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    DMatrix::from_fn(n1, r, |i, j| eig.eigenvectors[(i, order[j])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n)
            .flat_map(|last| {
                combinations(last, k - 1).into_iter().map(move |mut c| {
                    c.push(last);
                    c
                })
            })
            .collect()
    }

    #[test]
    fn sampled_points_are_members() {
        let mut r = rng_from(3);
        let sets = [
            SetSpec::finite(vec![vec![1.0, 2.0]]).unwrap(),
            SetSpec::sparse(16, 3, 1.0).unwrap(),
            SetSpec::SparseBall { n: 16, k: 3, radius: 1.0, basis: Some(OrthoBasis::dct(16)) },
            SetSpec::low_rank(4, 4, 1, 2.0).unwrap(),
            SetSpec::ball(5, 0.5).unwrap(),
        ];
        for s in &sets {
            for _ in 0..50 {
                let p = s.sample_point(&mut r);
                assert!(s.contains(&p), "{s:?} {p:?}");
            }
        }
        assert_eq!(sets[0].sample_point(&mut r), vec![1.0, 2.0]);
        let p = sets[1].sample_point(&mut r);
        assert!(p.iter().filter(|v| **v != 0.0).count() <= 3);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SetSpec::sparse(4, 5, 1.0).is_err());
        assert!(SetSpec::sparse(4, 0, 1.0).is_err());
        assert!(SetSpec::low_rank(3, 3, 4, 1.0).is_err());
        assert!(SetSpec::ball(3, -1.0).is_err());
        assert!(SetSpec::finite(vec![]).is_err());
        assert!(SetSpec::finite(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn sparse_sup_matches_support_enumeration() {
        let mut r = rng_from(5);
        for n in 1..=10 {
            for k in 1..=n {
                let set = SetSpec::sparse(n, k, 1.3).unwrap();
                let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
                let brute = combinations(n, k)
                    .iter()
                    .map(|s| s.iter().map(|&i| g[i] * g[i]).sum::<f64>().sqrt())
                    .fold(0.0, f64::max);
                assert!((set.sup_oracle(&g).unwrap() - 1.3 * brute).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_rank_sup_is_frobenius() {
        let mut r = rng_from(6);
        let set = SetSpec::low_rank(3, 3, 3, 1.0).unwrap();
        let g: Vec<f64> = (0..9).map(|_| StandardNormal.sample(&mut r)).collect();
        assert!((set.sup_oracle(&g).unwrap() - norm2(&g)).abs() < 1e-9);
    }

    #[test]
    fn ball_and_finite_sups() {
        let g = [3.0, -4.0];
        assert_eq!(SetSpec::ball(2, 1.0).unwrap().sup_oracle(&g).unwrap(), 5.0);
        let f = SetSpec::finite(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(f.sup_oracle(&g).unwrap(), 4.0);
        assert!(f.sup_oracle(&[1.0]).is_err());
    }

    #[test]
    fn low_rank_direction_preserves_rank() {
        let mut r = rng_from(8);
        let set = SetSpec::low_rank(5, 4, 2, 1.0).unwrap();
        for _ in 0..20 {
            let x = set.sample_point(&mut r);
            let u = set.admissible_direction(&x, &mut r).unwrap();
            let step = 0.3 * set.max_step(&x, &u);
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + step * b).collect();
            assert!(set.contains(&y));
        }
    }

    #[test]
    fn sparse_direction_stays_in_set() {
        let mut r = rng_from(9);
        let set = SetSpec::SparseBall { n: 32, k: 4, radius: 1.0, basis: Some(OrthoBasis::dct(32)) };
        for _ in 0..20 {
            let x = set.sample_point(&mut r);
            let u = set.admissible_direction(&x, &mut r).unwrap();
            let step = set.max_step(&x, &u);
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + step * b).collect();
            assert!(set.contains(&y));
            assert!((norm2(&y) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn parse_set_strings() {
        assert_eq!(SetSpec::parse("sparse:N=64,K=4,d=1").unwrap(), SetSpec::sparse(64, 4, 1.0).unwrap());
        assert_eq!(SetSpec::parse("ball:N=3").unwrap(), SetSpec::ball(3, 1.0).unwrap());
        assert_eq!(SetSpec::parse("lowrank:N1=4,N2=4,r=1,d=2").unwrap(), SetSpec::low_rank(4, 4, 1, 2.0).unwrap());
        assert!(matches!(SetSpec::parse("sparse:N=64,K=4,q=1"), Err(Error::Config(m)) if m.contains("'q'")));
        assert!(SetSpec::parse("cube:N=3").is_err());
        let mesh = SetSpec::parse("mesh:N=3,h=0.5,d=1").unwrap();
        // points of {-1,-0.5,0,0.5,1}^3 inside the unit ball
        let expected = (0..125)
            .filter(|i| {
                let c = [i % 5, (i / 5) % 5, i / 25].map(|v| (v as f64 - 2.0) * 0.5);
                norm2(&c) <= 1.0 + 1e-12
            })
            .count();
        match mesh {
            SetSpec::FiniteSet { points } => assert_eq!(points.len(), expected),
            _ => unreachable!(),
        }
    }

    #[test]
    fn dct_basis_is_orthonormal() {
        let b = OrthoBasis::dct(12);
        assert!(OrthoBasis::from_columns(12, b.entries.clone()).is_ok());
        let x: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let back = b.synthesize(&b.analyze(&x));
        assert!(x.iter().zip(&back).all(|(a, c)| (a - c).abs() < 1e-12));
    }
}
