use std::collections::HashMap;

use rayon::prelude::*;

use super::plan::{ExperimentResult, PerMStat, TrialPlan, TrialRecord};
use crate::distances::pseudo_distance;
use crate::error::{Error, Result};
use crate::geometry::{anti_sparsity, SetSpec};
use crate::quantizer::{QuantizedMap, QuantizerConfig};
use crate::rng::{self, Rng};
use crate::stats::{norm2, norm_inf, sub};
use crate::SQRT_2_OVER_PI;

const QUASI_ISOMETRY_TAG: u64 = 0x7169;
const CONSISTENCY_TAG: u64 = 0x6377;
/// Draws allowed per pair before the anti-sparsity filter is declared incompatible.
const MAX_FILTER_TRIES: usize = 1000;
/// Radii in the geometric pre-scan of each ray.
const SCAN_RADII: usize = 64;
/// Bisection stops at `2^-RESOLUTION_BITS · ‖K‖`.
const RESOLUTION_BITS: i32 = 20;

/// `(e, e / (‖x − y‖ + δ))` with `e = |D(x, y) − √(2/π)‖x − y‖|`.
pub fn pair_distortion(map: &QuantizedMap, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let d = pseudo_distance(map, x, y)?;
    let dist = norm2(&sub(x, y));
    let e = (d - SQRT_2_OVER_PI * dist).abs();
    Ok((e, e / (dist + map.delta())))
}

fn passes_filter(diff: &[f64], k0: f64) -> bool {
    norm_inf(diff) > 0.0 && anti_sparsity(diff, k0).is_ok_and(|r| k0 <= 0.0 || r.passed)
}

fn draw_pair(set: &SetSpec, rng: &mut Rng, k0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    for _ in 0..MAX_FILTER_TRIES {
        let x = set.sample_point(rng);
        let y = set.sample_point(rng);
        if passes_filter(&sub(&x, &y), k0) {
            return Ok((x, y));
        }
    }
    Err(Error::IncompatibleFilter(format!("no sampled difference reached anti-sparsity level {k0}")))
}

fn trial_grid(plan: &TrialPlan) -> Vec<(usize, usize)> {
    plan.m_grid.iter().flat_map(|&m| (0..plan.trials_per_m).map(move |j| (m, j))).collect()
}

fn collect(
    name: &str,
    plan: &TrialPlan,
    outcomes: Vec<(TrialRecord, Vec<f64>)>,
) -> ExperimentResult {
    let mut records = Vec::with_capacity(outcomes.len());
    let mut per_m = Vec::with_capacity(plan.m_grid.len());
    for (&m, chunk) in plan.m_grid.iter().zip(outcomes.chunks(plan.trials_per_m)) {
        let trials: Vec<TrialRecord> = chunk.iter().map(|(r, _)| r.clone()).collect();
        let values: Vec<f64> = chunk.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        per_m.push(PerMStat::from_trials(m, &trials, &values));
        records.extend(trials);
    }
    ExperimentResult::assemble(name, records, per_m, plan.master_seed)
}

/// Worst-case normalized distortion per map, less the `κ_sg/√K0` allowance,
/// fitted against `M`.
pub fn quasi_isometry_sweep(plan: &TrialPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let k0 = plan.k0_required();
    let allowance = plan.ensemble.kappa_sg / k0.max(1.0).sqrt();
    let quantizer = QuantizerConfig::floor(plan.delta)?;
    let n = plan.set.dim();
    let outcomes = trial_grid(plan)
        .into_par_iter()
        .map(|(m, j)| -> Result<(TrialRecord, Vec<f64>)> {
            let seed = rng::derive_seed(plan.master_seed, &[QUASI_ISOMETRY_TAG, m as u64, j as u64]);
            let map = QuantizedMap::sample(&plan.ensemble, m, n, quantizer, true, seed)?;
            let mut r = rng::rng_at(seed, &[2]);
            let mut values = Vec::with_capacity(plan.pairs_per_m);
            for _ in 0..plan.pairs_per_m {
                let (x, y) = draw_pair(&plan.set, &mut r, k0)?;
                values.push(pair_distortion(&map, &x, &y)?.1);
            }
            let statistic = values.iter().copied().fold(0.0, f64::max) - allowance;
            Ok((TrialRecord { m, trial: j, statistic, censored: statistic <= 0.0, seed }, values))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect("quasi-isometry", plan, outcomes))
}

/// Largest `r ≤ r_max` (to `resolution`) with `A(x + r u) = A(x)`.
fn ray_width(map: &QuantizedMap, x: &[f64], u: &[f64], r_max: f64, resolution: f64) -> Result<f64> {
    let px = map.project(x)?;
    let pu = map.matrix().project(u)?;
    let q = map.quantizer();
    let code: Vec<i64> = px.iter().map(|&t| q.quantize(t)).collect::<Result<_>>()?;
    let consistent = |r: f64| -> Result<bool> {
        for ((a, b), &c) in px.iter().zip(&pu).zip(&code) {
            if q.quantize(a + r * b)? != c {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if r_max <= resolution {
        return Ok(if consistent(r_max)? { r_max } else { 0.0 });
    }
    let ratio = r_max / resolution;
    let radius = |i: usize| {
        if i + 1 == SCAN_RADII {
            r_max
        } else {
            resolution * ratio.powf(i as f64 / (SCAN_RADII - 1) as f64)
        }
    };
    let mut first_bad = None;
    for i in 0..SCAN_RADII {
        if !consistent(radius(i))? {
            first_bad = Some(i);
            break;
        }
    }
    let (mut lo, mut hi) = match first_bad {
        None => return Ok(r_max),
        Some(0) => return Ok(0.0),
        Some(i) => (radius(i - 1), radius(i)),
    };
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if consistent(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest distance between consistent points of a finite set, per point.
fn finite_widths(map: &QuantizedMap, points: &[Vec<f64>], k0: f64) -> Result<Vec<f64>> {
    let mut groups: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        groups.entry(map.apply(p)?.0).or_default().push(i);
    }
    let mut widths = vec![0.0; points.len()];
    for members in groups.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let diff = sub(&points[i], &points[j]);
                if passes_filter(&diff, k0) {
                    let d = norm2(&diff);
                    widths[i] = f64::max(widths[i], d);
                    widths[j] = f64::max(widths[j], d);
                }
            }
        }
    }
    Ok(widths)
}

/// Largest consistent distance found per map (a lower estimate of the
/// consistency width), fitted against `M`. The set must lie in the unit ball.
pub fn consistency_width_sweep(plan: &TrialPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let diameter = plan.set.diameter();
    if diameter > 1.0 + 1e-12 {
        return Err(Error::PreconditionFailed(format!("set must lie in the unit ball, diameter is {diameter}")));
    }
    let resolution = diameter * 2f64.powi(-RESOLUTION_BITS);
    let k0 = plan.k0_required();
    let quantizer = QuantizerConfig::floor(plan.delta)?;
    let n = plan.set.dim();
    let outcomes = trial_grid(plan)
        .into_par_iter()
        .map(|(m, j)| -> Result<(TrialRecord, Vec<f64>)> {
            let seed = rng::derive_seed(plan.master_seed, &[CONSISTENCY_TAG, m as u64, j as u64]);
            let map = QuantizedMap::sample(&plan.ensemble, m, n, quantizer, true, seed)?;
            let widths = match &plan.set {
                SetSpec::FiniteSet { points } => finite_widths(&map, points, k0)?,
                set => {
                    let mut r = rng::rng_at(seed, &[2]);
                    let mut widths = Vec::with_capacity(plan.pairs_per_m);
                    for _ in 0..plan.pairs_per_m {
                        let (x, u, r_max) = draw_ray(set, &mut r, k0, resolution)?;
                        widths.push(ray_width(&map, &x, &u, r_max, resolution)?);
                    }
                    widths
                }
            };
            let statistic = widths.iter().copied().fold(0.0, f64::max);
            Ok((TrialRecord { m, trial: j, statistic, censored: statistic <= resolution, seed }, widths))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect("consistency-width", plan, outcomes))
}

fn draw_ray(set: &SetSpec, rng: &mut Rng, k0: f64, resolution: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    for _ in 0..MAX_FILTER_TRIES {
        let x = set.sample_point(rng);
        let Some(u) = set.admissible_direction(&x, rng) else { continue };
        let r_max = set.max_step(&x, &u);
        if r_max > resolution && passes_filter(&u, k0) {
            return Ok((x, u, r_max));
        }
    }
    Err(Error::IncompatibleFilter(format!("no admissible direction reached anti-sparsity level {k0}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::Ensemble;

    fn small_plan(set: SetSpec) -> TrialPlan {
        let mut p = TrialPlan::new(set, Ensemble::gaussian(), 0.5, vec![32, 64, 128, 256]);
        p.pairs_per_m = 20;
        p.trials_per_m = 3;
        p.master_seed = 5;
        p
    }

    #[test]
    fn identical_pair_has_zero_distortion() {
        let map = QuantizedMap::sample(&Ensemble::rademacher(), 64, 8, QuantizerConfig::floor(0.5).unwrap(), true, 1)
            .unwrap();
        let x = vec![0.3, -0.2, 0.0, 1.0, 0.5, 0.1, 0.0, -0.7];
        assert_eq!(pair_distortion(&map, &x, &x).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn sweep_is_reproducible_and_decays() {
        let plan = small_plan(SetSpec::sparse(64, 2, 1.0).unwrap());
        let a = quasi_isometry_sweep(&plan).unwrap();
        let b = quasi_isometry_sweep(&plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 12);
        assert!(a.slope().unwrap() < 0.0);
        for p in &a.per_m {
            assert!(p.worst >= p.q99 && p.q99 >= p.q90);
        }
    }

    #[test]
    fn impossible_filter_is_reported() {
        let mut plan = small_plan(SetSpec::sparse(64, 2, 1.0).unwrap());
        plan.k0 = 10.0;
        assert!(matches!(quasi_isometry_sweep(&plan), Err(Error::IncompatibleFilter(_))));
        plan.k0_filter = false;
        assert!(quasi_isometry_sweep(&plan).is_ok());
    }

    #[test]
    fn ray_width_matches_exact_crossing() {
        let map = QuantizedMap::sample(&Ensemble::gaussian(), 40, 4, QuantizerConfig::floor(0.5).unwrap(), true, 3)
            .unwrap();
        let x = vec![0.1, 0.2, -0.1, 0.05];
        let u = vec![0.5, 0.5, 0.5, 0.5];
        let px = map.project(&x).unwrap();
        let pu = map.matrix().project(&u).unwrap();
        // exact first boundary crossing along the ray
        let exact = px
            .iter()
            .zip(&pu)
            .map(|(&a, &b)| {
                let k = (a / 0.5).floor();
                if b > 0.0 {
                    ((k + 1.0) * 0.5 - a) / b
                } else {
                    (a - k * 0.5) / -b
                }
            })
            .fold(f64::INFINITY, f64::min);
        let res = 2f64.powi(-20);
        let w = ray_width(&map, &x, &u, 10.0, res).unwrap();
        assert!(w <= exact && exact - w <= 2.0 * res, "{w} vs {exact}");
        assert_eq!(ray_width(&map, &x, &u, exact / 2.0, res).unwrap(), exact / 2.0);
    }

    #[test]
    fn consistency_width_shrinks_and_requires_unit_ball() {
        let plan = small_plan(SetSpec::sparse(64, 2, 1.0).unwrap());
        let r = consistency_width_sweep(&plan).unwrap();
        assert!(r.slope().unwrap() < -0.5, "{:?}", r.fit);
        let big = small_plan(SetSpec::sparse(64, 2, 2.0).unwrap());
        assert!(matches!(consistency_width_sweep(&big), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn finite_width_on_mesh() {
        let mut plan = small_plan(SetSpec::mesh(2, 0.1, 1.0).unwrap());
        plan.m_grid = vec![4, 8, 16, 32];
        let r = consistency_width_sweep(&plan).unwrap();
        let first = r.per_m[0].statistic;
        let last = r.per_m.last().unwrap().statistic;
        assert!(first >= last, "{first} {last}");
    }

    #[test]
    fn huge_m_censors_finite_width() {
        let mut plan = small_plan(SetSpec::finite(vec![vec![0.0, 0.0], vec![0.5, 0.5]]).unwrap());
        plan.m_grid = vec![4096];
        plan.trials_per_m = 2;
        let r = consistency_width_sweep(&plan).unwrap();
        assert!(r.records.iter().all(|t| t.censored));
        assert!(r.per_m[0].censored);
        assert!(r.fit.is_none());
    }
}
