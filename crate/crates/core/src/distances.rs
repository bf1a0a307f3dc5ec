//! The code pseudo-distance `D(x, y) = (1/M)‖A(x) − A(y)‖₁` and its softened
//! variants `D^t`, which count the thresholds `kδ` separating two projections
//! `a`, `b` through the event
//!
//! ```text
//! F^t(a, b) = {a > t, b ≤ −t} ∪ {a < −t, b ≥ t}
//! ```
//!
//! evaluated at `(a − kδ, b − kδ)`. Positive `t` ignores thresholds that sit
//! within `t` of either value; negative `t` also counts near misses.

use crate::error::{check_dim, Error, Result};
use crate::quantizer::QuantizedMap;
use crate::stats::norm2;

/// Distance from an integer below which a threshold ratio is flagged.
pub const TIE_TOL: f64 = 1e-12;

/// Largest `k` with `pred(k)`, for `pred` true on a down-set of the integers.
fn last_true(mut k: i64, pred: impl Fn(i64) -> bool) -> i64 {
    while !pred(k) {
        k -= 1;
    }
    while pred(k + 1) {
        k += 1;
    }
    k
}

/// Smallest `k` with `pred(k)`, for `pred` true on an up-set of the integers.
fn first_true(mut k: i64, pred: impl Fn(i64) -> bool) -> i64 {
    while !pred(k) {
        k += 1;
    }
    while pred(k - 1) {
        k -= 1;
    }
    k
}

fn interval_len(lo: i64, hi: i64) -> u64 {
    if hi >= lo {
        (hi - lo + 1) as u64
    } else {
        0
    }
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= TIE_TOL * x.abs().max(1.0)
}

fn ratio_estimate(x: f64) -> Result<f64> {
    if x.abs() >= 4.0e15 {
        return Err(Error::invalid("threshold index out of exact range"));
    }
    Ok(x)
}

/// Threshold count with a flag marking near-tie evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoftCount {
    pub count: u64,
    pub near_tie: bool,
}

/// `#{k ∈ Z : F^t(a − kδ, b − kδ)}` in closed form.
///
/// Branch one is the integer interval `{k : b − kδ ≤ −t, a − kδ > t}` and
/// branch two `{k : a − kδ < −t, b − kδ ≥ t}`; their endpoints are located by
/// division and then corrected against the defining inequalities, evaluated
/// exactly as written. For `t < 0` the branches may overlap and the union is
/// counted once.
pub fn soft_count_1d_diagnostic(a: f64, b: f64, t: f64, delta: f64) -> Result<SoftCount> {
    if !(a.is_finite() && b.is_finite() && t.is_finite()) {
        return Err(Error::invalid("soft_count_1d needs finite inputs"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta must be positive"));
    }
    let kd = |k: i64| k as f64 * delta;
    let (ra_m, ra_p) = (ratio_estimate((a - t) / delta)?, ratio_estimate((a + t) / delta)?);
    let (rb_m, rb_p) = (ratio_estimate((b - t) / delta)?, ratio_estimate((b + t) / delta)?);

    // branch 1: ⌈(b+t)/δ⌉ ≤ k ≤ ceil_strict((a−t)/δ)
    let lo1 = first_true(rb_p.ceil() as i64, |k| b - kd(k) <= -t);
    let hi1 = last_true(ra_m.ceil() as i64 - 1, |k| a - kd(k) > t);
    // branch 2: floor_strict((a+t)/δ) ≤ k ≤ ⌊(b−t)/δ⌋
    let lo2 = first_true(ra_p.floor() as i64 + 1, |k| a - kd(k) < -t);
    let hi2 = last_true(rb_m.floor() as i64, |k| b - kd(k) >= t);

    let n1 = interval_len(lo1, hi1);
    let n2 = interval_len(lo2, hi2);
    let overlap = interval_len(lo1.max(lo2), hi1.min(hi2));
    let overlap = if n1 > 0 && n2 > 0 { overlap } else { 0 };
    let near_tie = [ra_m, ra_p, rb_m, rb_p].into_iter().any(near_integer);
    Ok(SoftCount { count: n1 + n2 - overlap, near_tie })
}

/// One-dimensional soft count `d^t(a, b) / δ`.
pub fn soft_count_1d(a: f64, b: f64, t: f64, delta: f64) -> Result<u64> {
    soft_count_1d_diagnostic(a, b, t, delta).map(|c| c.count)
}

/// Per-coordinate soft threshold counts for a pair of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCount {
    pub per_coordinate: Vec<u64>,
    pub t: f64,
    pub delta: f64,
    /// Coordinates where some threshold ratio sat within `TIE_TOL` of an integer.
    pub near_ties: Vec<usize>,
}

impl ThresholdCount {
    /// `D^t = (δ/M) Σ_i count_i`.
    pub fn value(&self) -> f64 {
        let total: u64 = self.per_coordinate.iter().sum();
        self.delta * total as f64 / self.per_coordinate.len() as f64
    }
}

/// Soft counts on already-dithered projections.
pub fn threshold_count_projected(px: &[f64], py: &[f64], t: f64, delta: f64) -> Result<ThresholdCount> {
    check_dim(px.len(), py.len())?;
    let mut per_coordinate = Vec::with_capacity(px.len());
    let mut near_ties = Vec::new();
    for (i, (&a, &b)) in px.iter().zip(py).enumerate() {
        let c = soft_count_1d_diagnostic(a, b, t, delta)?;
        per_coordinate.push(c.count);
        if c.near_tie {
            near_ties.push(i);
        }
    }
    Ok(ThresholdCount { per_coordinate, t, delta, near_ties })
}

pub fn threshold_count(map: &QuantizedMap, x: &[f64], y: &[f64], t: f64) -> Result<ThresholdCount> {
    check_dim(x.len(), y.len())?;
    threshold_count_projected(&map.project(x)?, &map.project(y)?, t, map.delta())
}

/// `D(x, y) = (δ/M) Σ_i |code_i(x) − code_i(y)|`.
pub fn pseudo_distance(map: &QuantizedMap, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    let px = map.project(x)?;
    let py = map.project(y)?;
    let cx = map.quantize_projected(&px)?;
    let cy = map.quantize_projected(&py)?;
    let l1 = cx.l1_distance(&cy)?;
    if cfg!(debug_assertions) && map.quantizer().variant == crate::quantizer::QuantizerVariant::Floor {
        let soft = threshold_count_projected(&px, &py, 0.0, map.delta())?;
        if soft.near_ties.is_empty() {
            debug_assert_eq!(soft.per_coordinate.iter().sum::<u64>(), l1);
        }
    }
    Ok(map.delta() * l1 as f64 / map.rows() as f64)
}

/// `D^t(x, y)`, nonincreasing in `t`.
pub fn soft_pseudo_distance(map: &QuantizedMap, x: &[f64], y: &[f64], t: f64) -> Result<f64> {
    threshold_count(map, x, y, t).map(|c| c.value())
}

/// Number of quantization thresholds separating `x` and `y` in each coordinate,
/// i.e. `|code_i(x) − code_i(y)|`.
pub fn hyperplane_count(map: &QuantizedMap, x: &[f64], y: &[f64]) -> Result<Vec<u64>> {
    check_dim(x.len(), y.len())?;
    let cx = map.apply(x)?;
    let cy = map.apply(y)?;
    Ok(cx.0.iter().zip(&cy.0).map(|(p, q)| p.abs_diff(*q)).collect())
}

/// Both sides of the one-dimensional softening bounds
/// `|d^t − d^s| ≤ 4(δ + |t − s|)` and `|d^t − |a − b|| ≤ 4(δ + |t|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SofteningCheck {
    pub lhs_ts: f64,
    pub bound_ts: f64,
    pub lhs_abs: f64,
    pub bound_abs: f64,
}

impl SofteningCheck {
    pub fn holds(&self) -> bool {
        self.lhs_ts <= self.bound_ts && self.lhs_abs <= self.bound_abs
    }
}

pub fn softening_check(a: f64, b: f64, t: f64, s: f64, delta: f64) -> Result<SofteningCheck> {
    if !s.is_finite() {
        return Err(Error::invalid("s must be finite"));
    }
    let dt = delta * soft_count_1d(a, b, t, delta)? as f64;
    let ds = delta * soft_count_1d(a, b, s, delta)? as f64;
    Ok(SofteningCheck {
        lhs_ts: (dt - ds).abs(),
        bound_ts: 4.0 * (delta + (t - s).abs()),
        lhs_abs: (dt - (a - b).abs()).abs(),
        bound_abs: 4.0 * (delta + t.abs()),
    })
}

/// `D^{|τ|} ≤ D ≤ D^{−|τ|}` with the per-coordinate one-dimensional slacks.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftDistanceReport {
    pub d0: f64,
    pub dt_plus: f64,
    pub dt_minus: f64,
    /// Per coordinate: `(|d^{|τ|} − d^{−|τ|}| − 4(δ + 2|τ|), max_± |d^{±|τ|} − |a − b|| − 4(δ + |τ|))`.
    pub softening_slack: Vec<(f64, f64)>,
}

impl SoftDistanceReport {
    pub fn sandwich_holds(&self) -> bool {
        self.dt_plus <= self.d0 && self.d0 <= self.dt_minus
    }

    pub fn slack_ok(&self) -> bool {
        self.softening_slack.iter().all(|&(p, q)| p <= 0.0 && q <= 0.0)
    }
}

pub fn soft_distance_report(map: &QuantizedMap, x: &[f64], y: &[f64], tau: f64) -> Result<SoftDistanceReport> {
    check_dim(x.len(), y.len())?;
    let tau = tau.abs();
    let delta = map.delta();
    let px = map.project(x)?;
    let py = map.project(y)?;
    let plus = threshold_count_projected(&px, &py, tau, delta)?;
    let minus = threshold_count_projected(&px, &py, -tau, delta)?;
    let softening_slack = px
        .iter()
        .zip(&py)
        .zip(plus.per_coordinate.iter().zip(&minus.per_coordinate))
        .map(|((&a, &b), (&cp, &cm))| {
            let (dp, dm) = (delta * cp as f64, delta * cm as f64);
            let ts = (dp - dm).abs() - 4.0 * (delta + 2.0 * tau);
            let gap = (a - b).abs();
            let abs = (dp - gap).abs().max((dm - gap).abs()) - 4.0 * (delta + tau);
            (ts, abs)
        })
        .collect();
    Ok(SoftDistanceReport {
        d0: pseudo_distance(map, x, y)?,
        dt_plus: plus.value(),
        dt_minus: minus.value(),
        softening_slack,
    })
}

/// The three sides of the ℓ2-perturbation continuity bound
/// `D^{t+η√P}(x₀,y₀) − c ≤ D^t(x₀+x', y₀+y') ≤ D^{t−η√P}(x₀,y₀) + c`,
/// `c = 4(δ/P + η/√P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationCheck {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

impl PerturbationCheck {
    pub fn holds(&self) -> bool {
        self.lower <= self.middle && self.middle <= self.upper
    }
}

#[allow(clippy::too_many_arguments)]
pub fn perturbation_check(
    map: &QuantizedMap,
    x0: &[f64],
    y0: &[f64],
    xp: &[f64],
    yp: &[f64],
    t: f64,
    eta: f64,
    p_cap: f64,
) -> Result<PerturbationCheck> {
    if !(eta > 0.0) || !(p_cap >= 1.0) {
        return Err(Error::invalid("need eta > 0 and P >= 1"));
    }
    for v in [y0, xp, yp] {
        check_dim(x0.len(), v.len())?;
    }
    let limit = eta * (map.rows() as f64).sqrt();
    let nx = norm2(&map.matrix().project(xp)?);
    let ny = norm2(&map.matrix().project(yp)?);
    if nx > limit * (1.0 + 1e-12) || ny > limit * (1.0 + 1e-12) {
        return Err(Error::PreconditionFailed(format!(
            "‖Φx'‖ = {nx}, ‖Φy'‖ = {ny} exceed η√M = {limit}"
        )));
    }
    let shift = eta * p_cap.sqrt();
    let slack = 4.0 * (map.delta() / p_cap + eta / p_cap.sqrt());
    let x1: Vec<f64> = x0.iter().zip(xp).map(|(a, b)| a + b).collect();
    let y1: Vec<f64> = y0.iter().zip(yp).map(|(a, b)| a + b).collect();
    Ok(PerturbationCheck {
        lower: soft_pseudo_distance(map, x0, y0, t + shift)? - slack,
        middle: soft_pseudo_distance(map, &x1, &y1, t)?,
        upper: soft_pseudo_distance(map, x0, y0, t - shift)? + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{Ensemble, SensingMatrix};
    use crate::quantizer::{Dither, QuantizerConfig};
    use crate::rng;
    use proptest::prelude::*;
    use rand::Rng as _;

    /// Literal enumeration of the defining event over a window wide enough for any `t`.
    use crate::reference::soft_count_enumerate as enumerate;

    #[test]
    fn worked_examples() {
        assert_eq!(soft_count_1d(0.2, 2.7, 0.0, 1.0).unwrap(), 2);
        assert_eq!(soft_count_1d(0.9, 1.1, 0.3, 1.0).unwrap(), 0);
        assert_eq!(soft_count_1d(0.9, 1.1, 0.0, 1.0).unwrap(), 1);
        assert_eq!(soft_count_1d(0.9, 1.1, -0.3, 1.0).unwrap(), 1);
        for t in [0.0, 0.1, 2.0] {
            assert_eq!(soft_count_1d(1.37, 1.37, t, 0.5).unwrap(), 0);
        }
        assert!(soft_count_1d(f64::NAN, 0.0, 0.0, 1.0).is_err());
        assert!(soft_count_1d(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_enumeration_on_random_tuples() {
        let mut r = rng::rng_from(17);
        for _ in 0..20_000 {
            let a = r.random_range(-20.0..20.0);
            let b = r.random_range(-20.0..20.0);
            let t = r.random_range(-3.0..3.0);
            let delta = [0.1, 1.0, 2.0][r.random_range(0..3)];
            assert_eq!(soft_count_1d(a, b, t, delta).unwrap(), enumerate(a, b, t, delta), "{a} {b} {t} {delta}");
        }
    }

    #[test]
    fn closed_form_matches_enumeration_on_lattice_ties() {
        for delta in [0.1, 0.5, 1.0] {
            for i in -6..=6 {
                for j in -6..=6 {
                    for tk in -3..=3 {
                        let (a, b, t) = (i as f64 * delta / 2.0, j as f64 * delta / 2.0, tk as f64 * delta / 4.0);
                        assert_eq!(soft_count_1d(a, b, t, delta).unwrap(), enumerate(a, b, t, delta));
                    }
                }
            }
        }
    }

    #[test]
    fn softening_examples() {
        let c = softening_check(0.2, 2.7, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(c.lhs_ts, 0.0);
        assert_eq!(c.bound_ts, 4.0);
        assert!((c.lhs_abs - 0.5).abs() < 1e-15);
        assert!(c.holds());
    }

    fn small_map(seed: u64, m: usize, n: usize, delta: f64) -> QuantizedMap {
        QuantizedMap::sample(&Ensemble::gaussian(), m, n, QuantizerConfig::floor(delta).unwrap(), true, seed).unwrap()
    }

    #[test]
    fn pseudo_distance_cases() {
        let map = small_map(1, 50, 6, 0.4);
        let x = [0.3, -0.2, 0.0, 0.5, 0.1, -0.7];
        let y = [0.1, 0.2, -0.3, 0.0, 0.4, 0.2];
        assert_eq!(pseudo_distance(&map, &x, &x).unwrap(), 0.0);
        // independent scalar path: recompute each code from the raw entries
        let code = |v: &[f64]| -> Vec<i64> {
            (0..map.rows())
                .map(|i| {
                    let row = map.matrix().row(i);
                    let p: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() + map.dither().unwrap().values()[i];
                    (p / 0.4).floor() as i64
                })
                .collect()
        };
        let expected = 0.4 * code(&x).iter().zip(code(&y)).map(|(a, b)| (a - b).abs()).sum::<i64>() as f64 / 50.0;
        assert!((pseudo_distance(&map, &x, &y).unwrap() - expected).abs() < 1e-12);
        assert_eq!(soft_pseudo_distance(&map, &x, &y, 0.0).unwrap(), pseudo_distance(&map, &x, &y).unwrap());
        assert!(pseudo_distance(&map, &x, &y[..3]).is_err());
    }

    #[test]
    fn rademacher_unit_pair_has_unit_distance() {
        for (seed, m) in [(0u64, 16usize), (1, 64), (2, 333)] {
            let map =
                QuantizedMap::sample(&Ensemble::rademacher(), m, 3, QuantizerConfig::floor(1.0).unwrap(), true, seed)
                    .unwrap();
            assert_eq!(pseudo_distance(&map, &[1.0, 0.0, 0.0], &[0.0; 3]).unwrap(), 1.0);
            assert!(hyperplane_count(&map, &[1.0, 0.0, 0.0], &[0.0; 3]).unwrap().iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn hyperplane_count_matches_soft_count_at_zero() {
        let map = small_map(4, 40, 5, 0.3);
        let x = [0.5, -0.1, 0.2, 0.9, -0.4];
        let y = [-0.2, 0.3, 0.1, 0.0, 0.6];
        let h = hyperplane_count(&map, &x, &y).unwrap();
        let s = threshold_count(&map, &x, &y, 0.0).unwrap();
        assert_eq!(h, s.per_coordinate);
        assert!(hyperplane_count(&map, &x, &x).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn large_t_kills_every_count() {
        let map = small_map(5, 30, 4, 0.5);
        let x = [0.2, 0.1, -0.3, 0.4];
        let y = [-0.1, 0.5, 0.2, 0.0];
        let px = map.project(&x).unwrap();
        let py = map.project(&y).unwrap();
        let spread = px.iter().chain(&py).fold(0.0_f64, |m, v| m.max(v.abs()));
        assert_eq!(soft_pseudo_distance(&map, &x, &y, spread + 1.0).unwrap(), 0.0);
    }

    #[test]
    fn soft_distance_is_monotone_on_grid() {
        let phi = vec![0.3, -1.1, 0.8, 0.4, -0.6, 1.5, 2.0, 0.1];
        let m = SensingMatrix::from_entries(Ensemble::gaussian(), 4, 2, phi).unwrap();
        let map = QuantizedMap::new(
            m,
            Some(Dither::from_values(vec![0.05, 0.31, 0.12, 0.44], 0.5).unwrap()),
            QuantizerConfig::floor(0.5).unwrap(),
        )
        .unwrap();
        let (x, y) = ([1.2, -0.4], [-0.3, 0.9]);
        let grid: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| soft_pseudo_distance(&map, &x, &y, t).unwrap()).collect();
        // enumeration oracle on the same projections
        let px = map.project(&x).unwrap();
        let py = map.project(&y).unwrap();
        for (&t, &v) in grid.iter().zip(&vals) {
            let total: u64 = px.iter().zip(&py).map(|(&a, &b)| enumerate(a, b, t, 0.5)).sum();
            assert!((v - 0.5 * total as f64 / 4.0).abs() < 1e-15);
        }
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
    }

    #[test]
    fn report_sandwich_and_slack() {
        let map = small_map(8, 64, 5, 0.25);
        let x = [0.3, 0.2, -0.5, 0.1, 0.0];
        let y = [0.0, -0.4, 0.3, 0.2, 0.6];
        for tau in [0.0, 0.05, -0.2, 1.0] {
            let r = soft_distance_report(&map, &x, &y, tau).unwrap();
            assert!(r.sandwich_holds());
            assert!(r.slack_ok());
        }
    }

    #[test]
    fn perturbation_reduces_to_monotonicity_without_perturbation() {
        let map = small_map(9, 32, 4, 0.5);
        let x0 = [0.1, 0.7, -0.2, 0.3];
        let y0 = [-0.3, 0.2, 0.4, 0.0];
        let z = [0.0; 4];
        let c = perturbation_check(&map, &x0, &y0, &z, &z, 0.1, 0.05, 4.0).unwrap();
        assert!(c.holds());
    }

    #[test]
    fn perturbation_precondition_is_distinct_error() {
        let map = small_map(10, 32, 4, 0.5);
        let x0 = [0.1, 0.7, -0.2, 0.3];
        let big = [5.0, 5.0, 5.0, 5.0];
        let err = perturbation_check(&map, &x0, &x0, &big, &big, 0.0, 0.01, 4.0).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
    }

    #[test]
    fn perturbation_holds_on_random_instances() {
        let mut r = rng::rng_from(33);
        for trial in 0..300 {
            let map = small_map(100 + trial, 24, 5, [0.25, 0.5, 1.0][trial as usize % 3]);
            let mut v = || (0..5).map(|_| r.random_range(-1.0..1.0)).collect::<Vec<f64>>();
            let (x0, y0) = (v(), v());
            let scale = 0.05;
            let xp: Vec<f64> = v().iter().map(|a| a * scale).collect();
            let yp: Vec<f64> = v().iter().map(|a| a * scale).collect();
            let nx = norm2(&map.matrix().project(&xp).unwrap());
            let ny = norm2(&map.matrix().project(&yp).unwrap());
            let eta = nx.max(ny) / (map.rows() as f64).sqrt();
            let t = r.random_range(-0.5..0.5);
            let c = perturbation_check(&map, &x0, &y0, &xp, &yp, t, eta, 4.0).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    proptest! {
        #[test]
        fn soft_count_agrees_with_enumeration(
            a in -20.0f64..20.0, b in -20.0f64..20.0, t in -3.0f64..3.0, di in 0usize..3
        ) {
            let delta = [0.1, 1.0, 2.0][di];
            prop_assert_eq!(soft_count_1d(a, b, t, delta).unwrap(), enumerate(a, b, t, delta));
        }

        #[test]
        fn softening_bounds_hold(
            a in -20.0f64..20.0, b in -20.0f64..20.0, t in -3.0f64..3.0, s in -3.0f64..3.0, di in 0usize..3
        ) {
            let delta = [0.1, 1.0, 2.0][di];
            prop_assert!(softening_check(a, b, t, s, delta).unwrap().holds());
        }

        #[test]
        fn soft_count_nonincreasing_in_t(a in -5.0f64..5.0, b in -5.0f64..5.0, t in -2.0f64..2.0, dt in 0.0f64..1.0) {
            prop_assert!(soft_count_1d(a, b, t + dt, 0.5).unwrap() <= soft_count_1d(a, b, t, 0.5).unwrap());
        }
    }
}
