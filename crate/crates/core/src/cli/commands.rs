use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand_distr::{Distribution, StandardNormal};

use super::{
    Cli, CombinatoricsArgs, Command, CounterexampleArgs, DistanceArgs, EmbedArgs, LemmaArgs, MapArgs, MinMArgs,
    SelftestArgs, SweepArgs, WidthArgs,
};
use crate::distances::{pseudo_distance, soft_pseudo_distance};
use crate::ensembles::{Ensemble, EnsembleKind, KappaSource, GENERIC_KAPPA_FACTOR};
use crate::error::{Error, Result};
use crate::experiments::{
    bernoulli_floor_distortion, consistency_width_sweep, de_moivre_mad, expectation_check,
    diameter_check, chernoff_check, no_dither_counterexample, quasi_isometry_sweep, report,
    bernoulli_floor_check, gaussian_contrast, stirling_gosper_check, ExperimentResult, TrialPlan, Verdict,
};
use crate::geometry::{minimal_m, width_estimate, RequirementKind, SetSpec};
use crate::quantizer::{write_codes, QuantizedMap, QuantizerConfig, QuantizerVariant};
use crate::reference::binomial_mad_enumerate;
use crate::rng;
use crate::selftest::{self, Scale};
use crate::stats::{norm2, sub};
use crate::vectors::read_vectors;
use crate::SQRT_2_OVER_PI;

pub(super) fn dispatch(cli: &Cli, command: &Command, out: &mut dyn Write) -> Result<bool> {
    let seed = cli.seed;
    let dir = cli.out.as_path();
    match command {
        Command::Embed(a) => embed(a, seed, out),
        Command::Distance(a) => distance(a, seed, out),
        Command::Width(a) => width(a, seed, out),
        Command::MinM(a) => min_m(a, out),
        Command::QuasiIsometry(a) => sweep(a, seed, dir, out, command.name()),
        Command::ConsistencyWidth(a) => sweep(a, seed, dir, out, command.name()),
        Command::Counterexamples(a) => counterexamples(a, seed, dir, out),
        Command::Lemmas(a) => lemmas(a, seed, dir, out),
        Command::Combinatorics(a) => combinatorics(a, dir, out),
        Command::Selftest(a) => run_selftest(a, seed, dir, out),
    }
}

pub(super) fn ensemble(name: &str, kappa_source: Option<&str>, seed: u64) -> Result<Ensemble> {
    let base = Ensemble::new(EnsembleKind::parse(name)?);
    let Some(source) = kappa_source else { return Ok(base) };
    match KappaSource::parse(source)? {
        KappaSource::ExactZero if base.kind != EnsembleKind::Gaussian => {
            Err(Error::invalid("kappa source exact-zero is only valid for the gaussian ensemble"))
        }
        KappaSource::ExactZero => Ok(base),
        KappaSource::GenericBound => Ok(Ensemble {
            kappa_sg: GENERIC_KAPPA_FACTOR * base.alpha.powi(3),
            kappa_source: KappaSource::GenericBound,
            ..base
        }),
        KappaSource::Estimated => base.with_estimated_kappa(16, 100_000, rng::derive_seed(seed, &[0x6b61])),
    }
}

fn variant(name: &str) -> Result<QuantizerVariant> {
    match name {
        "floor" => Ok(QuantizerVariant::Floor),
        "round" => Ok(QuantizerVariant::Round),
        other => Err(Error::invalid(format!("unknown quantizer variant '{other}' (expected floor or round)"))),
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<Vec<f64>>> {
    match path {
        Some(p) => {
            let f = File::open(p).map_err(|e| Error::invalid(format!("cannot open {}: {e}", p.display())))?;
            read_vectors(BufReader::new(f))
        }
        None => read_vectors(std::io::stdin().lock()),
    }
}

fn same_dim(vs: &[Vec<f64>]) -> Result<usize> {
    let n = vs.first().map(Vec::len).ok_or_else(|| Error::invalid("no input vectors"))?;
    if n == 0 {
        return Err(Error::invalid("input vectors are empty"));
    }
    for v in vs {
        crate::error::check_dim(n, v.len())?;
    }
    Ok(n)
}

fn build_map(a: &MapArgs, n: usize, seed: u64) -> Result<QuantizedMap> {
    let ens = ensemble(&a.ensemble, a.kappa_source.as_deref(), seed)?;
    let cfg = QuantizerConfig::new(a.delta, variant(&a.variant)?)?;
    QuantizedMap::sample(&ens, a.m, n, cfg, !a.no_dither, seed)
}

fn pair(path: Option<&PathBuf>) -> Result<(Vec<f64>, Vec<f64>)> {
    let vs = read_input(path.map(PathBuf::as_path))?;
    if vs.len() != 2 {
        return Err(Error::invalid(format!("expected exactly two vectors, got {}", vs.len())));
    }
    same_dim(&vs)?;
    let mut it = vs.into_iter();
    Ok((it.next().expect("two"), it.next().expect("two")))
}

fn embed(a: &EmbedArgs, seed: u64, out: &mut dyn Write) -> Result<bool> {
    let vs = read_input(a.input.as_deref())?;
    let n = same_dim(&vs)?;
    if let Some(spec) = &a.set {
        let set = SetSpec::parse(spec)?;
        crate::error::check_dim(set.dim(), n)?;
        if let Some(i) = vs.iter().position(|v| !set.contains(v)) {
            return Err(Error::invalid(format!("input vector {} lies outside the set", i + 1)));
        }
    }
    let map = build_map(&a.map, n, seed)?;
    let codes = vs.iter().map(|v| map.apply(v)).collect::<Result<Vec<_>>>()?;
    write_codes(out, &codes)?;
    Ok(true)
}

fn distance(a: &DistanceArgs, seed: u64, out: &mut dyn Write) -> Result<bool> {
    let (x, y) = pair(a.input.as_ref())?;
    let map = build_map(&a.map, x.len(), seed)?;
    let dist = norm2(&sub(&x, &y));
    writeln!(out, "D = {}", pseudo_distance(&map, &x, &y)?)?;
    writeln!(out, "D^t = {} (t = {})", soft_pseudo_distance(&map, &x, &y, a.t)?, a.t)?;
    writeln!(out, "|x - y| = {dist}")?;
    writeln!(out, "sqrt(2/pi) |x - y| = {}", SQRT_2_OVER_PI * dist)?;
    Ok(true)
}

fn width(a: &WidthArgs, seed: u64, out: &mut dyn Write) -> Result<bool> {
    let set = SetSpec::parse(&a.set)?;
    let w = width_estimate(&set, a.draws, seed)?;
    writeln!(out, "width = {} +- {} ({} draws)", w.mean, w.stderr, w.draws)?;
    writeln!(out, "radius = {}", set.diameter())?;
    Ok(true)
}

fn min_m(a: &MinMArgs, out: &mut dyn Write) -> Result<bool> {
    let set = SetSpec::parse(&a.set)?;
    let m = minimal_m(&set, RequirementKind::parse(&a.kind)?, a.eps, a.delta, a.c)?;
    writeln!(out, "m = {m}")?;
    Ok(true)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|_| Error::invalid(format!("{what}: '{p}' is not valid"))))
        .collect()
}

fn write_results(dir: &Path, results: &[&ExperimentResult]) -> Result<()> {
    for r in results {
        report::write_experiment(r, dir)?;
    }
    let mut f = BufWriter::new(File::create(dir.join("summary.csv"))?);
    report::write_summary(results, &mut f)?;
    f.flush()?;
    Ok(())
}

fn sweep(a: &SweepArgs, seed: u64, dir: &Path, out: &mut dyn Write, which: &str) -> Result<bool> {
    let mut plan = TrialPlan::new(
        SetSpec::parse(&a.set)?,
        ensemble(&a.ensemble, a.kappa_source.as_deref(), seed)?,
        a.delta,
        parse_list(&a.m_grid, "m-grid")?,
    );
    plan.pairs_per_m = a.pairs;
    plan.trials_per_m = a.trials;
    plan.k0 = a.k0;
    plan.k0_filter = !a.no_k0_filter;
    plan.master_seed = seed;
    let mut res = if which == "quasi-isometry" { quasi_isometry_sweep(&plan)? } else { consistency_width_sweep(&plan)? };
    match (a.slope_min, a.slope_max) {
        (Some(lo), Some(hi)) => res = res.judge_slope(lo, hi),
        (None, None) => {}
        _ => return Err(Error::invalid("give both --slope-min and --slope-max, or neither")),
    }
    writeln!(out, "{:>8} {:>14} {:>14} {:>14} {:>14} {:>9}", "m", "statistic", "worst", "q90", "q99", "censored")?;
    for p in &res.per_m {
        writeln!(
            out,
            "{:>8} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>9}",
            p.m, p.statistic, p.worst, p.q90, p.q99, p.censored_trials
        )?;
    }
    match res.fit {
        Some(f) => writeln!(out, "slope = {} +- {} ({} points, {} censored)", f.slope, f.stderr, f.used, f.censored)?,
        None => writeln!(out, "slope = none (fewer than three usable points)")?,
    }
    writeln!(out, "verdict = {}", res.verdict.name())?;
    std::fs::create_dir_all(dir)?;
    write_results(dir, &[&res])?;
    Ok(res.verdict != Verdict::Fail)
}

/// Named quantities printed as `check.quantity = value` and saved as
/// `check,quantity,value` rows.
#[derive(Default)]
struct Rows(Vec<(String, String, String)>);

impl Rows {
    fn add(&mut self, check: &str, quantity: &str, value: impl ToString) {
        self.0.push((check.to_string(), quantity.to_string(), value.to_string()));
    }

    fn finish(&self, dir: &Path, name: &str, out: &mut dyn Write) -> Result<()> {
        for (c, q, v) in &self.0 {
            writeln!(out, "{c}.{q} = {v}")?;
        }
        std::fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join(format!("{name}.csv")))?;
        w.write_record(["check", "quantity", "value"])?;
        for (c, q, v) in &self.0 {
            w.write_record([c, q, v])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn pick<'a>(which: &str, all: &'a [&'a str]) -> Result<Vec<&'a str>> {
    if which == "all" {
        return Ok(all.to_vec());
    }
    all.iter()
        .find(|&&w| w == which)
        .map(|&w| vec![w])
        .ok_or_else(|| Error::invalid(format!("unknown check '{which}' (expected one of {} or all)", all.join(", "))))
}

fn counterexamples(a: &CounterexampleArgs, seed: u64, dir: &Path, out: &mut dyn Write) -> Result<bool> {
    let mut rows = Rows::default();
    let mut ok = true;
    for which in pick(&a.which, &["no-dither", "bernoulli-floor"])? {
        if which == "no-dither" {
            let r = no_dither_counterexample(a.k0, a.s, a.m, a.trials, rng::derive_seed(seed, &[1]))?;
            ok &= r.pass_rate == 1.0;
            rows.add(which, "trials", r.trials);
            rows.add(which, "identical", r.identical);
            rows.add(which, "pass_rate", r.pass_rate);
            rows.add(which, "consistency_width", r.consistency_width);
        } else {
            let r = bernoulli_floor_check(a.m, a.trials, rng::derive_seed(seed, &[2]))?;
            ok &= r.holds();
            rows.add(which, "trials", r.trials);
            rows.add(which, "exact", r.exact);
            rows.add(which, "min_d", r.min_d);
            rows.add(which, "max_d", r.max_d);
            rows.add(which, "floor", r.floor);
            let g = gaussian_contrast(&Ensemble::gaussian(), a.m, a.trials, rng::derive_seed(seed, &[3]))?;
            rows.add(which, "gaussian_mean_d", g.value);
            rows.add(which, "gaussian_stderr", g.stderr);
        }
    }
    rows.add("all", "verdict", Verdict::from_bool(ok).name());
    rows.finish(dir, "counterexamples", out)?;
    Ok(ok)
}

fn lemma_pair(a: &LemmaArgs, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.input.is_some() {
        return pair(a.input.as_ref());
    }
    let mut r = rng::rng_at(seed, &[0]);
    let n = 16;
    let u: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
    let d: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
    let s = 0.5 / norm2(&d);
    let v = u.iter().zip(&d).map(|(a, b)| a + s * b).collect();
    Ok((u, v))
}

fn lemmas(a: &LemmaArgs, seed: u64, dir: &Path, out: &mut dyn Write) -> Result<bool> {
    let ens = ensemble(&a.ensemble, a.kappa_source.as_deref(), seed)?;
    let (u, v) = lemma_pair(a, seed)?;
    let mut rows = Rows::default();
    let mut ok = true;
    for which in pick(&a.which, &["expectation", "diameter", "chernoff"])? {
        match which {
            "expectation" => {
                let grid = parse_list::<f64>(&a.t_grid, "t-grid")?;
                let r = expectation_check(&ens, &u, &v, a.delta, a.m, &grid, a.trials, rng::derive_seed(seed, &[1]))?;
                ok &= r.t0_ok;
                rows.add(which, "mu", r.mu.value);
                for (t, e) in &r.means {
                    rows.add(which, &format!("mean_d_t={t}"), e.value);
                }
                rows.add(which, "fitted_c", r.fitted_c);
                rows.add(which, "t0_ok", r.t0_ok);
            }
            "diameter" => {
                let set = SetSpec::parse(&a.set)?;
                let r = diameter_check(&set, a.eta, &ens, a.m, a.trials, rng::derive_seed(seed, &[2]), a.factor)?;
                ok &= r.failures == 0;
                rows.add(which, "factor", r.factor);
                rows.add(which, "failures", r.failures);
                rows.add(which, "failures_unit_factor", r.failures_unit_factor);
                rows.add(which, "max_ratio", r.max_ratio);
                rows.add(which, "fitted_c", r.fitted_c);
            }
            _ => {
                let eps0 = norm2(&sub(&u, &v));
                let r = chernoff_check(
                    &u,
                    &v,
                    a.k0,
                    a.t,
                    &ens,
                    a.delta,
                    a.m,
                    a.r,
                    a.trials,
                    rng::derive_seed(seed, &[3]),
                    eps0,
                )?;
                ok &= r.holds();
                rows.add(which, "p_hat", r.p_hat.value);
                rows.add(which, "r", r.r);
                rows.add(which, "left", r.left.value);
                rows.add(which, "chernoff", r.chernoff);
                rows.add(which, "vacuous", r.vacuous);
                rows.add(which, "chernoff_ok", r.chernoff_ok);
                rows.add(which, "p_lower_bound", r.p_lower_bound);
                match &r.p_lower_ok {
                    Ok(b) => rows.add(which, "p_lower_ok", b),
                    Err(reason) => rows.add(which, "p_lower_skipped", reason),
                }
            }
        }
    }
    rows.add("all", "verdict", Verdict::from_bool(ok).name());
    rows.finish(dir, "lemmas", out)?;
    Ok(ok)
}

fn combinatorics(a: &CombinatoricsArgs, dir: &Path, out: &mut dyn Write) -> Result<bool> {
    if a.mad_max < 2 {
        return Err(Error::invalid("mad-max must be at least 2"));
    }
    let st = stirling_gosper_check(a.stirling_max)?;
    let mut rows = Rows::default();
    rows.add("stirling", "n_max", st.n_max);
    rows.add("stirling", "failures", st.failures.len());
    rows.add("stirling", "min_lower_margin", st.min_lower_margin);
    rows.add("stirling", "min_upper_margin", st.min_upper_margin);
    let (mut gap_fail, mut doubled_miss, mut agree) = (0, 0, 0.0_f64);
    for k0 in (2..=a.mad_max).step_by(2) {
        let r = bernoulli_floor_distortion(k0)?;
        gap_fail += usize::from(!r.gap_holds() || !r.distortion_holds());
        doubled_miss += usize::from(r.distortion < r.distortion_floor_doubled);
        if k0 <= 120 {
            agree = agree.max((de_moivre_mad(k0)? - binomial_mad_enumerate(k0 as u32)?).abs());
        }
    }
    rows.add("mad", "k0_max", a.mad_max);
    rows.add("mad", "gap_failures", gap_fail);
    rows.add("mad", "de_moivre_max_err", agree);
    rows.add("mad", "doubled_floor_misses", doubled_miss);
    let ok = st.holds() && gap_fail == 0 && agree <= 1e-12;
    rows.add("all", "verdict", Verdict::from_bool(ok).name());
    rows.finish(dir, "combinatorics", out)?;
    Ok(ok)
}

fn run_selftest(a: &SelftestArgs, seed: u64, dir: &Path, out: &mut dyn Write) -> Result<bool> {
    let scale = Scale::parse(&a.scale)?;
    let ids: Vec<u8> = match &a.only {
        Some(s) => parse_list(s, "only")?,
        None => Vec::new(),
    };
    let outcomes = selftest::run(seed, scale, &ids)?;
    for o in &outcomes {
        writeln!(out, "{}", o.line())?;
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    writeln!(out, "{passed}/{} criteria passed", outcomes.len())?;
    std::fs::create_dir_all(dir)?;
    let mut f = BufWriter::new(File::create(dir.join("selftest.csv"))?);
    selftest::write_summary(&outcomes, &mut f)?;
    f.flush()?;
    let experiments: Vec<&ExperimentResult> = outcomes.iter().flat_map(|o| o.experiments.iter()).collect();
    write_results(dir, &experiments)?;
    Ok(passed == outcomes.len())
}
