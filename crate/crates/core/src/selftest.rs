//! The acceptance catalogue: thirteen checks run from a single master seed.
//!
//! Each criterion draws from its own derived seed, so running one criterion
//! alone reproduces exactly what it computes inside a full run. Details are
//! built from deterministic values only, which keeps the summary CSV stable
//! across runs and worker counts.

use std::fmt::Write as _;
use std::io::Write;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::distances::{softening_check, soft_count_1d, soft_distance_report, soft_pseudo_distance};
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::experiments::{
    bernoulli_floor_distortion, consistency_width_sweep, de_moivre_mad, expectation_identity, chernoff_check,
    no_dither_counterexample, quasi_isometry_sweep, bernoulli_floor_check, stirling_gosper_check,
    ExperimentResult, TrialPlan, Verdict,
};
use crate::geometry::{width_estimate, SetSpec};
use crate::quantizer::{dithered_floor_mean, QuantizedMap, QuantizerConfig};
use crate::reference::{binomial_mad_enumerate, dithered_floor_integral, soft_count_enumerate, sparse_sup_enumerate};
use crate::rng::{self, Rng};
use crate::stats::{norm2, norm_inf, sub};
use crate::SQRT_2_OVER_PI;

/// Sample sizes. `Full` uses the published sizes; `Quick` shrinks the two
/// decay sweeps and the large Monte Carlo loops for smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Scale::Quick),
            "full" => Ok(Scale::Full),
            _ => Err(Error::invalid(format!("unknown scale `{s}` (expected quick or full)"))),
        }
    }

    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    /// Sweep results produced along the way, for CSV export.
    pub experiments: Vec<ExperimentResult>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn line(&self) -> String {
        format!("[{:>4}] {:>2} {}: {}", self.verdict.name(), self.id, self.name, self.detail)
    }
}

type Check = fn(u64, Scale) -> Result<(bool, String, Vec<ExperimentResult>)>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    /// Criteria sharing a stream see the same random draws.
    stream: u64,
    check: Check,
}

impl Criterion {
    pub fn run(&self, master_seed: u64, scale: Scale) -> Outcome {
        let seed = rng::derive_seed(master_seed, &[0x7365_6c66, self.stream]);
        let (verdict, detail, experiments) = match (self.check)(seed, scale) {
            Ok((ok, detail, ex)) => (Verdict::from_bool(ok), detail, ex),
            Err(e) => (Verdict::Fail, format!("error: {e}"), Vec::new()),
        };
        Outcome { id: self.id, name: self.name, verdict, detail, experiments }
    }
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, stream: 1, name: "dithered-floor-identity", check: dithered_floor_identity },
    Criterion { id: 2, stream: 2, name: "soft-count-enumeration", check: soft_count_enumeration },
    Criterion { id: 3, stream: 2, name: "softening-bounds", check: softening_bounds },
    Criterion { id: 4, stream: 4, name: "soft-distance-sandwich", check: soft_distance_sandwich },
    Criterion { id: 5, stream: 5, name: "expectation-identity", check: expectation_identity_check },
    Criterion { id: 6, stream: 6, name: "berry-esseen-envelope", check: berry_esseen_envelope },
    Criterion { id: 7, stream: 7, name: "bernoulli-floor", check: bernoulli_floor },
    Criterion { id: 8, stream: 8, name: "no-dither-counterexample", check: no_dither },
    Criterion { id: 9, stream: 9, name: "binomial-stirling", check: binomial_stirling },
    Criterion { id: 10, stream: 10, name: "quasi-isometry-decay", check: quasi_isometry_decay },
    Criterion { id: 11, stream: 11, name: "consistency-width-decay", check: consistency_width_decay },
    Criterion { id: 12, stream: 12, name: "chernoff-lower-tail", check: chernoff_lower_tail },
    Criterion { id: 13, stream: 13, name: "width-oracles", check: width_oracles },
];

pub fn criterion(id: u8) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

/// Runs the listed criteria (all when `ids` is empty) in id order.
pub fn run(master_seed: u64, scale: Scale, ids: &[u8]) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for &id in ids {
        if criterion(id).is_none() {
            return Err(Error::invalid(format!("no criterion with id {id}")));
        }
    }
    for c in CRITERIA.iter().filter(|c| ids.is_empty() || ids.contains(&c.id)) {
        out.push(c.run(master_seed, scale));
    }
    Ok(out)
}

pub fn write_summary<W: Write>(outcomes: &[Outcome], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["criterion", "name", "verdict", "detail"])?;
    for o in outcomes {
        w.write_record([o.id.to_string().as_str(), o.name, o.verdict.name(), &o.detail])?;
    }
    w.flush()?;
    Ok(())
}

fn uniform(r: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.random::<f64>()
}

fn gaussian_vec(r: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(r)).collect()
}

fn dithered_floor_identity(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let samples = scale.pick(20_000, 100_000);
    let mut r = rng::rng_at(seed, &[0]);
    let (mut mc_fail, mut oracle_err) = (0, 0.0_f64);
    for i in 0..20u64 {
        let (x, y) = (uniform(&mut r, -5.0, 5.0), uniform(&mut r, -5.0, 5.0));
        let est = dithered_floor_mean(x, y, samples, rng::derive_seed(seed, &[1, i]))?;
        if !est.within((x - y).abs(), 3.0) {
            mc_fail += 1;
        }
        oracle_err = oracle_err.max((dithered_floor_integral(x, y) - (x - y).abs()).abs());
    }
    let ok = mc_fail == 0 && oracle_err <= 1e-12;
    Ok((ok, format!("pairs=20 samples={samples} outside_3se={mc_fail} oracle_max_err={oracle_err:e}"), vec![]))
}

/// The shared random tuples `(a, b, t, s, δ)` of criteria 2 and 3.
fn tuples(seed: u64, count: usize) -> Vec<(f64, f64, f64, f64, f64)> {
    rng::map_chunks(count, seed, |r, n| {
        (0..n)
            .map(|_| {
                let a = uniform(r, -20.0, 20.0);
                let b = uniform(r, -20.0, 20.0);
                let t = uniform(r, -3.0, 3.0);
                let s = uniform(r, -3.0, 3.0);
                let delta = [0.1, 1.0, 2.0][r.random_range(0..3)];
                (a, b, t, s, delta)
            })
            .collect::<Vec<_>>()
    })
    .concat()
}

fn soft_count_enumeration(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let count = scale.pick(20_000, 100_000);
    let mismatches = tuples(seed, count)
        .par_iter()
        .map(|&(a, b, t, _, d)| Ok(u64::from(soft_count_1d(a, b, t, d)? != soft_count_enumerate(a, b, t, d))))
        .collect::<Result<Vec<u64>>>()?
        .iter()
        .sum::<u64>();
    Ok((mismatches == 0, format!("tuples={count} mismatches={mismatches}"), vec![]))
}

fn softening_bounds(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let count = scale.pick(20_000, 100_000);
    let violations = tuples(seed, count)
        .par_iter()
        .map(|&(a, b, t, s, d)| Ok(u64::from(!softening_check(a, b, t, s, d)?.holds())))
        .collect::<Result<Vec<u64>>>()?
        .iter()
        .sum::<u64>();
    Ok((violations == 0, format!("tuples={count} violations={violations}"), vec![]))
}

fn soft_distance_sandwich(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let instances = scale.pick(200, 1000);
    let ensembles = [Ensemble::gaussian(), Ensemble::rademacher(), Ensemble::bounded_uniform()];
    let bad = (0..instances as u64)
        .into_par_iter()
        .map(|i| -> Result<(u64, u64)> {
            let mut r = rng::rng_at(seed, &[i]);
            let ens = &ensembles[(i % 3) as usize];
            let delta = [0.25, 0.5, 1.0, 2.0][r.random_range(0..4)];
            let (m, n) = (r.random_range(1..=64), r.random_range(1..=16));
            let map = QuantizedMap::sample(ens, m, n, QuantizerConfig::floor(delta)?, true, rng::derive_seed(seed, &[i, 1]))?;
            let x = gaussian_vec(&mut r, n);
            let y = gaussian_vec(&mut r, n);
            let tau = uniform(&mut r, 0.0, 2.0) * delta;
            let rep = soft_distance_report(&map, &x, &y, tau)?;
            let sandwich = u64::from(!rep.sandwich_holds() || !rep.slack_ok());
            let mut prev = f64::INFINITY;
            let mut mono = 0;
            for k in -8..=8 {
                let d = soft_pseudo_distance(&map, &x, &y, k as f64 * delta / 4.0)?;
                if d > prev {
                    mono = 1;
                }
                prev = d;
            }
            Ok((sandwich, mono))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    let ok = bad == (0, 0);
    Ok((ok, format!("instances={instances} sandwich_violations={} monotonicity_violations={}", bad.0, bad.1), vec![]))
}

fn expectation_identity_check(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let trials = scale.pick(2_000, 10_000);
    let mut r = rng::rng_at(seed, &[0]);
    let (mut outside, mut worst) = (0, 0.0_f64);
    for i in 0..10u64 {
        let x = gaussian_vec(&mut r, 16);
        let y = gaussian_vec(&mut r, 16);
        let target = SQRT_2_OVER_PI * norm2(&sub(&x, &y));
        let est = expectation_identity(&Ensemble::gaussian(), &x, &y, 1.0, 16, trials, rng::derive_seed(seed, &[1, i]))?;
        if !est.within(target, 3.0) {
            outside += 1;
        }
        worst = worst.max((est.value - target).abs() / est.stderr);
    }
    Ok((outside == 0, format!("pairs=10 trials={trials} outside_3se={outside} max_z={worst:.3}"), vec![]))
}

fn berry_esseen_envelope(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let samples = scale.pick(50_000, 200_000);
    let ens = Ensemble::rademacher();
    let mut r = rng::rng_at(seed, &[0]);
    let (mut fail, mut worst) = (0, 0.0_f64);
    for i in 0..10u64 {
        let u = gaussian_vec(&mut r, 32);
        let mu = crate::ensembles::mu_sg(&ens, &u, samples, rng::derive_seed(seed, &[1, i]))?;
        let gap = (mu.value - SQRT_2_OVER_PI * norm2(&u)).abs();
        let allowance = ens.kappa_sg * norm_inf(&u);
        if gap > allowance + 3.0 * mu.stderr {
            fail += 1;
        }
        worst = worst.max(gap / norm_inf(&u));
    }
    Ok((
        fail == 0,
        format!("vectors=10 kappa_sg={} violations={fail} max_gap_over_inf_norm={worst:.5}", ens.kappa_sg),
        vec![],
    ))
}

fn bernoulli_floor(seed: u64, _scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let mut exceptions = 0;
    let mut floor = 0.0;
    for (i, m) in [16usize, 256, 4096].into_iter().enumerate() {
        let rep = bernoulli_floor_check(m, 100, rng::derive_seed(seed, &[i as u64]))?;
        exceptions += rep.trials - rep.exact;
        floor = rep.floor;
    }
    let ok = exceptions == 0 && floor > 0.202;
    Ok((ok, format!("m=16,256,4096 trials=100 exceptions={exceptions} floor={floor:.6}"), vec![]))
}

fn no_dither(seed: u64, _scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let rep = no_dither_counterexample(64, 0.4, 512, 1000, seed)?;
    Ok((
        rep.pass_rate == 1.0,
        format!("k0=64 s=0.4 m=512 trials=1000 pass_rate={} width={}", rep.pass_rate, rep.consistency_width),
        vec![],
    ))
}

fn binomial_stirling(_seed: u64, _scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let stirling = stirling_gosper_check(10_000)?;
    let mut gap_fail = 0;
    let mut doubled_fail = 0;
    for k0 in (2..=40).step_by(2) {
        let rep = bernoulli_floor_distortion(k0)?;
        if !rep.gap_holds() || !rep.distortion_holds() {
            gap_fail += 1;
        }
        if rep.distortion < rep.distortion_floor_doubled {
            doubled_fail += 1;
        }
    }
    let mut agree_err = 0.0_f64;
    for n in 1..=30usize {
        let exact = binomial_mad_enumerate(2 * n as u32)?;
        agree_err = agree_err.max((de_moivre_mad(2 * n)? - exact).abs());
    }
    let ok = stirling.holds() && gap_fail == 0 && agree_err <= 1e-12;
    Ok((
        ok,
        format!(
            "stirling_failures={} gap_failures={gap_fail} de_moivre_max_err={agree_err:e} doubled_floor_misses={doubled_fail}",
            stirling.failures.len()
        ),
        vec![],
    ))
}

fn decay_plan(seed: u64, scale: Scale) -> Result<TrialPlan> {
    let m_grid = match scale {
        Scale::Quick => vec![128, 256, 512, 1024],
        Scale::Full => vec![128, 256, 512, 1024, 2048, 4096, 8192],
    };
    let mut plan = TrialPlan::new(SetSpec::sparse(512, 4, 1.0)?, Ensemble::gaussian(), 0.5, m_grid);
    plan.pairs_per_m = scale.pick(50, 200);
    plan.trials_per_m = scale.pick(6, 20);
    plan.master_seed = seed;
    Ok(plan)
}

fn slope_detail(res: &ExperimentResult) -> String {
    match res.fit {
        Some(f) => format!("slope={:.4} stderr={:.4} used={} censored={}", f.slope, f.stderr, f.used, f.censored),
        None => "slope=none".to_string(),
    }
}

fn quasi_isometry_decay(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let res = quasi_isometry_sweep(&decay_plan(seed, scale)?)?.judge_slope(-0.65, -0.35);
    Ok((res.verdict == Verdict::Pass, format!("target=-0.5 band=[-0.65,-0.35] {}", slope_detail(&res)), vec![res]))
}

fn consistency_width_decay(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let structured = consistency_width_sweep(&decay_plan(seed, scale)?)?.judge_slope(-1.25, -0.75);
    let mut mesh_plan = TrialPlan::new(SetSpec::mesh(3, 0.125, 1.0)?, Ensemble::gaussian(), 0.5, vec![8, 16, 32, 64, 128]);
    mesh_plan.trials_per_m = scale.pick(4, 10);
    mesh_plan.master_seed = rng::derive_seed(seed, &[3]);
    let mut mesh = consistency_width_sweep(&mesh_plan)?;
    mesh.experiment = "consistency-width-mesh".to_string();
    let detail = format!(
        "target=-1 band=[-1.25,-0.75] {} | mesh target=-0.25 (info) {}",
        slope_detail(&structured),
        slope_detail(&mesh)
    );
    Ok((structured.verdict == Verdict::Pass, detail, vec![structured, mesh]))
}

fn chernoff_lower_tail(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let trials = scale.pick(400, 2000);
    let n = 16;
    let u = vec![0.0; n];
    let flat: Vec<f64> = vec![0.5 / (n as f64).sqrt(); n];
    let mut r = rng::rng_at(seed, &[0]);
    let mut g = gaussian_vec(&mut r, n);
    let s = 0.5 / norm2(&g);
    g.iter_mut().for_each(|v| *v *= s);
    // (difference, k0, t, ensemble, delta, m)
    let configs: [(&[f64], f64, f64, Ensemble, f64, usize); 5] = [
        (&g, 1.0, 0.0, Ensemble::gaussian(), 1.0, 64),
        (&g, 1.0, 0.05, Ensemble::gaussian(), 1.0, 128),
        (&flat, 16.0, 0.0, Ensemble::gaussian(), 0.5, 32),
        (&flat, 16.0, 0.0, Ensemble::rademacher(), 1.0, 64),
        (&g, 1.0, 5.0, Ensemble::gaussian(), 1.0, 64),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (v, k0, t, ens, delta, m)) in configs.iter().enumerate() {
        let eps0 = norm2(v);
        let rep =
            chernoff_check(&u, v, *k0, *t, ens, *delta, *m, None, trials, rng::derive_seed(seed, &[1, i as u64]), eps0)?;
        ok &= rep.holds();
        let lower = match &rep.p_lower_ok {
            Ok(b) => format!("{b}"),
            Err(_) => "skipped".to_string(),
        };
        let mut part = String::new();
        write!(part, "#{i} p={:.4} left={:.4} chernoff={:.4} lower={lower}", rep.p_hat.value, rep.left.value, rep.chernoff)
            .expect("write to string");
        parts.push(part);
    }
    Ok((ok, format!("trials={trials} {}", parts.join(" ")), vec![]))
}

fn width_oracles(seed: u64, scale: Scale) -> Result<(bool, String, Vec<ExperimentResult>)> {
    let mut r = rng::rng_at(seed, &[0]);
    let mut sup_err = 0.0_f64;
    for n in 1..=10usize {
        for k in 1..=n {
            let set = SetSpec::sparse(n, k, 1.5)?;
            let g = gaussian_vec(&mut r, n);
            let exact = sparse_sup_enumerate(&g, k, 1.5);
            sup_err = sup_err.max((set.sup_oracle(&g)? - exact).abs() / exact.max(1.0));
        }
    }
    let draws = scale.pick(20_000, 100_000);
    let ball = width_estimate(&SetSpec::ball(2, 1.0)?, draws, rng::derive_seed(seed, &[1]))?;
    let ball_target = (std::f64::consts::PI / 2.0).sqrt();
    let point = gaussian_vec(&mut r, 5);
    let single = width_estimate(&SetSpec::finite(vec![point.clone()])?, draws, rng::derive_seed(seed, &[2]))?;
    let single_target = SQRT_2_OVER_PI * norm2(&point);
    let within = |w: &crate::geometry::WidthEstimate, t: f64| (w.mean - t).abs() <= 3.0 * w.stderr;
    let ok = sup_err <= 1e-12 && within(&ball, ball_target) && within(&single, single_target);
    Ok((
        ok,
        format!(
            "sparse_sup_max_rel_err={sup_err:e} ball={:.5}+-{:.5} (target {ball_target:.5}) singleton={:.5}+-{:.5} (target {single_target:.5})",
            ball.mean, ball.stderr, single.mean, single.stderr
        ),
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_ids_are_contiguous() {
        let ids: Vec<u8> = CRITERIA.iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=13).collect::<Vec<u8>>());
        assert!(criterion(14).is_none());
        assert!(run(0, Scale::Quick, &[99]).is_err());
    }

    #[test]
    fn cheap_criteria_pass_quickly() {
        for o in run(3, Scale::Quick, &[1, 7, 8, 13]).unwrap() {
            assert!(o.passed(), "{}", o.line());
        }
    }

    #[test]
    fn summary_is_reproducible() {
        let a = run(11, Scale::Quick, &[1, 9]).unwrap();
        let b = run(11, Scale::Quick, &[1, 9]).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_summary(&a, &mut x).unwrap();
        write_summary(&b, &mut y).unwrap();
        assert_eq!(x, y);
        assert!(String::from_utf8(x).unwrap().starts_with("criterion,name,verdict,detail\n1,"));
    }
}
