//! Uniform scalar quantization with uniform dithering, and the frozen map
//! `A(x) = Q(Φx + ξ)`.
//!
//! Codes are integer bin indices; the quantized value is `δ · index`.

use std::fmt::Write as _;
use std::io::BufRead;

use rand::Rng as _;

use crate::ensembles::{sample_matrix, Ensemble, SensingMatrix};
use crate::error::{check_dim, Error, Result};
use crate::rng;
use crate::stats::Moments;
use crate::stats::Estimate;

/// Relative distance (in units of δ) below which a projection is reported as
/// sitting on a bin boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantizerVariant {
    /// `Q(t) = δ⌊t/δ⌋`.
    Floor,
    /// `Q(t) = δ⌊t/δ + 1/2⌋`, ties rounded up.
    Round,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerConfig {
    delta: f64,
    pub variant: QuantizerVariant,
}

impl QuantizerConfig {
    pub fn new(delta: f64, variant: QuantizerVariant) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid(format!("delta must be positive and finite, got {delta}")));
        }
        Ok(QuantizerConfig { delta, variant })
    }

    pub fn floor(delta: f64) -> Result<Self> {
        Self::new(delta, QuantizerVariant::Floor)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Bin index of `t`: the largest `k` with `fl(k·δ) ≤ t` (Floor) or
    /// `fl((k − 1/2)·δ) ≤ t` (Round). Comparing against the rounded lattice
    /// point keeps `quantize(kδ) = k` exact.
    pub fn quantize(&self, t: f64) -> Result<i64> {
        if !t.is_finite() {
            return Err(Error::invalid(format!("cannot quantize non-finite value {t}")));
        }
        let (offset, estimate) = match self.variant {
            QuantizerVariant::Floor => (0.0, (t / self.delta).floor()),
            QuantizerVariant::Round => (0.5, (t / self.delta + 0.5).floor()),
        };
        if estimate.abs() >= 4.0e15 {
            return Err(Error::invalid(format!("value {t} overflows the exact code range")));
        }
        let threshold = |k: i64| (k as f64 - offset) * self.delta;
        let mut k = estimate as i64;
        while threshold(k) > t {
            k -= 1;
        }
        while threshold(k + 1) <= t {
            k += 1;
        }
        Ok(k)
    }

    /// Whether `t` lies within `BOUNDARY_TOL · δ` of a decision threshold.
    pub fn near_boundary(&self, t: f64) -> bool {
        let s = match self.variant {
            QuantizerVariant::Floor => t / self.delta,
            QuantizerVariant::Round => t / self.delta + 0.5,
        };
        (s - s.round()).abs() <= BOUNDARY_TOL * s.abs().max(1.0)
    }
}

/// `quantize(cfg, t)` as a free function.
pub fn quantize(cfg: &QuantizerConfig, t: f64) -> Result<i64> {
    cfg.quantize(t)
}

/// Uniform dither values in `[0, δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dither {
    values: Vec<f64>,
    pub seed: Option<u64>,
}

impl Dither {
    pub fn uniform(m: usize, delta: f64, seed: u64) -> Self {
        let mut r = rng::rng_from(seed);
        let values = (0..m).map(|_| r.random_range(0.0..delta)).collect();
        Dither { values, seed: Some(seed) }
    }

    pub fn from_values(values: Vec<f64>, delta: f64) -> Result<Self> {
        if let Some(bad) = values.iter().find(|&&v| !(0.0..delta).contains(&v)) {
            return Err(Error::invalid(format!("dither value {bad} outside [0, {delta})")));
        }
        Ok(Dither { values, seed: None })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A code `A(x)/δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantizedCode(pub Vec<i64>);

impl QuantizedCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1_distance(&self, other: &QuantizedCode) -> Result<u64> {
        check_dim(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.abs_diff(*b)).sum())
    }

    /// One line of space-separated signed integers.
    pub fn to_line(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 3);
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{v}").expect("writing to a String");
        }
        s
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        line.split_whitespace()
            .map(|tok| tok.parse::<i64>().map_err(|e| Error::invalid(format!("bad code entry '{tok}': {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(QuantizedCode)
    }
}

/// Writes codes one per line.
pub fn write_codes<W: std::io::Write>(mut w: W, codes: &[QuantizedCode]) -> Result<()> {
    for c in codes {
        writeln!(w, "{}", c.to_line())?;
    }
    Ok(())
}

/// Reads codes one per line; blank lines are skipped.
pub fn read_codes<R: BufRead>(r: R) -> Result<Vec<QuantizedCode>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(QuantizedCode::parse_line(&line)?);
        }
    }
    Ok(out)
}

/// A frozen realisation `A(·) = Q(Φ · + ξ)`. Undithered maps use `ξ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedMap {
    matrix: SensingMatrix,
    dither: Option<Dither>,
    quantizer: QuantizerConfig,
}

impl QuantizedMap {
    pub fn new(matrix: SensingMatrix, dither: Option<Dither>, quantizer: QuantizerConfig) -> Result<Self> {
        if let Some(d) = &dither {
            check_dim(matrix.rows(), d.len())?;
            if d.values().iter().any(|&v| !(0.0..quantizer.delta()).contains(&v)) {
                return Err(Error::invalid("dither values must lie in [0, delta)"));
            }
        }
        Ok(QuantizedMap { matrix, dither, quantizer })
    }

    /// Draws `Φ` and, when `dithered`, `ξ ~ U([0, δ))^M` from seeds derived from `seed`.
    pub fn sample(
        ensemble: &Ensemble,
        m: usize,
        n: usize,
        quantizer: QuantizerConfig,
        dithered: bool,
        seed: u64,
    ) -> Result<Self> {
        let matrix = sample_matrix(ensemble, m, n, rng::derive_seed(seed, &[0]))?;
        let dither = dithered.then(|| Dither::uniform(m, quantizer.delta(), rng::derive_seed(seed, &[1])));
        Self::new(matrix, dither, quantizer)
    }

    pub fn matrix(&self) -> &SensingMatrix {
        &self.matrix
    }

    pub fn dither(&self) -> Option<&Dither> {
        self.dither.as_ref()
    }

    pub fn quantizer(&self) -> &QuantizerConfig {
        &self.quantizer
    }

    pub fn delta(&self) -> f64 {
        self.quantizer.delta()
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Dithered projections `Φx + ξ`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut p = self.matrix.project(x)?;
        if let Some(d) = &self.dither {
            for (v, xi) in p.iter_mut().zip(d.values()) {
                *v += xi;
            }
        }
        Ok(p)
    }

    /// Quantizes already-dithered projections.
    pub fn quantize_projected(&self, projected: &[f64]) -> Result<QuantizedCode> {
        check_dim(self.rows(), projected.len())?;
        projected.iter().map(|&t| self.quantizer.quantize(t)).collect::<Result<Vec<_>>>().map(QuantizedCode)
    }

    pub fn apply(&self, x: &[f64]) -> Result<QuantizedCode> {
        self.quantize_projected(&self.project(x)?)
    }

    /// Coordinates whose projection sits on a bin boundary (within `BOUNDARY_TOL · δ`).
    pub fn boundary_flags(&self, x: &[f64]) -> Result<Vec<usize>> {
        Ok(self
            .project(x)?
            .iter()
            .enumerate()
            .filter(|&(_, &t)| self.quantizer.near_boundary(t))
            .map(|(i, _)| i)
            .collect())
    }
}

/// `apply(map, x)` as a free function.
pub fn apply(map: &QuantizedMap, x: &[f64]) -> Result<QuantizedCode> {
    map.apply(x)
}

/// Monte Carlo estimate of `E|⌊x+ξ⌋ − ⌊y+ξ⌋|` for `ξ ~ U([0,1))`.
pub fn dithered_floor_mean(x: f64, y: f64, samples: usize, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::invalid("samples must be positive"));
    }
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::invalid("inputs must be finite"));
    }
    let parts = rng::map_chunks(samples, seed, |r, n| {
        let mut m = Moments::default();
        for _ in 0..n {
            let xi: f64 = r.random();
            m.push(((x + xi).floor() - (y + xi).floor()).abs());
        }
        m
    });
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge).estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quantize_examples() {
        let f1 = QuantizerConfig::floor(1.0).unwrap();
        assert_eq!(f1.quantize(2.3).unwrap(), 2);
        let f05 = QuantizerConfig::floor(0.5).unwrap();
        assert_eq!(f05.quantize(-0.1).unwrap(), -1);
        let r1 = QuantizerConfig::new(1.0, QuantizerVariant::Round).unwrap();
        assert_eq!(r1.quantize(0.49).unwrap(), 0);
        assert_eq!(r1.quantize(0.5).unwrap(), 1);
        assert_eq!(r1.quantize(-0.5).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(QuantizerConfig::floor(0.0).is_err());
        assert!(QuantizerConfig::floor(-1.0).is_err());
        assert!(QuantizerConfig::floor(f64::NAN).is_err());
        let q = QuantizerConfig::floor(1.0).unwrap();
        assert!(q.quantize(f64::INFINITY).is_err());
        assert!(q.quantize(f64::NAN).is_err());
        assert!(Dither::from_values(vec![0.2, 1.0], 1.0).is_err());
    }

    #[test]
    fn lattice_points_are_exact() {
        for delta in [0.1, 0.5, 1.0, 2.0] {
            let q = QuantizerConfig::floor(delta).unwrap();
            for k in -1_000_000i64..=1_000_000 {
                assert_eq!(q.quantize(k as f64 * delta).unwrap(), k, "delta={delta} k={k}");
            }
        }
    }

    fn fixed_map() -> (QuantizedMap, Vec<f64>, Vec<f64>) {
        let phi = vec![0.7, -1.2, 0.3, 2.1, -0.4, -0.9];
        let xi = vec![0.1, 0.45, 0.3];
        let m = SensingMatrix::from_entries(Ensemble::gaussian(), 3, 2, phi.clone()).unwrap();
        let map = QuantizedMap::new(
            m,
            Some(Dither::from_values(xi.clone(), 0.5).unwrap()),
            QuantizerConfig::floor(0.5).unwrap(),
        )
        .unwrap();
        (map, phi, xi)
    }

    #[test]
    fn apply_matches_scalar_recomputation() {
        let (map, phi, xi) = fixed_map();
        let x = [0.8, -0.35];
        let code = map.apply(&x).unwrap();
        let expected: Vec<i64> = (0..3)
            .map(|i| ((phi[2 * i] * x[0] + phi[2 * i + 1] * x[1] + xi[i]) / 0.5).floor() as i64)
            .collect();
        assert_eq!(code.0, expected);
        assert!(matches!(map.apply(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_input_gives_zero_code() {
        let map = QuantizedMap::sample(&Ensemble::gaussian(), 64, 8, QuantizerConfig::floor(0.7).unwrap(), true, 3)
            .unwrap();
        assert!(map.apply(&[0.0; 8]).unwrap().0.iter().all(|&c| c == 0));
    }

    #[test]
    fn rademacher_unit_vector_codes() {
        for seed in 0..5 {
            let map =
                QuantizedMap::sample(&Ensemble::rademacher(), 128, 4, QuantizerConfig::floor(1.0).unwrap(), true, seed)
                    .unwrap();
            let code = map.apply(&[1.0, 0.0, 0.0, 0.0]).unwrap();
            assert!(code.0.iter().all(|&c| c == 1 || c == -1));
        }
    }

    #[test]
    fn shift_covariance_of_dither() {
        let (map, _, xi) = fixed_map();
        let shifted: Vec<f64> = xi.iter().map(|v| v + 3.0 * 0.5).collect();
        // a shift by kδ leaves [0, δ), so build the shifted map from raw parts
        let raw = QuantizedMap { dither: Some(Dither { values: shifted, seed: None }), ..map.clone() };
        let x = [0.31, 1.7];
        let a = map.apply(&x).unwrap();
        let b = raw.apply(&x).unwrap();
        assert!(a.0.iter().zip(&b.0).all(|(p, q)| q - p == 3));
    }

    #[test]
    fn dithered_floor_mean_examples() {
        assert_eq!(dithered_floor_mean(0.4, 0.4, 100, 1).unwrap().value, 0.0);
        let e = dithered_floor_mean(0.3, 1.7, 100_000, 2).unwrap();
        assert!(e.within(1.4, 3.0), "{e:?}");
        let e = dithered_floor_mean(-2.6, 0.4, 100_000, 3).unwrap();
        assert!(e.within(3.0, 3.0), "{e:?}");
    }

    #[test]
    fn code_text_format() {
        let codes = vec![QuantizedCode(vec![-3, 0, 12]), QuantizedCode(vec![5])];
        let mut buf = Vec::new();
        write_codes(&mut buf, &codes).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "-3 0 12\n5\n");
        assert_eq!(read_codes(&buf[..]).unwrap(), codes);
        assert!(QuantizedCode::parse_line("1 x").is_err());
    }

    proptest! {
        #[test]
        fn code_line_round_trip(v in proptest::collection::vec(any::<i64>(), 0..20)) {
            let c = QuantizedCode(v);
            prop_assert_eq!(QuantizedCode::parse_line(&c.to_line()).unwrap(), c);
        }

        #[test]
        fn floor_code_brackets_value(t in -1e6f64..1e6, delta in 0.01f64..10.0) {
            let q = QuantizerConfig::floor(delta).unwrap();
            let k = q.quantize(t).unwrap() as f64;
            prop_assert!(k * delta <= t + 1e-9 * t.abs().max(1.0));
            prop_assert!(t < (k + 1.0) * delta + 1e-9 * t.abs().max(1.0));
        }
    }
}
