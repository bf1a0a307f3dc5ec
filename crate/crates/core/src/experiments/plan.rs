use super::fit::{fit_loglog_slope, SlopeFit};
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::geometry::SetSpec;
use crate::stats::quantile;

/// Parameters of a decay sweep over a grid of measurement counts.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub set: SetSpec,
    pub ensemble: Ensemble,
    pub delta: f64,
    pub m_grid: Vec<usize>,
    /// Pairs (or anchors) drawn for each map.
    pub pairs_per_m: usize,
    /// Independent maps drawn for each `M`.
    pub trials_per_m: usize,
    /// Anti-sparsity level required of difference vectors.
    pub k0: f64,
    /// Disables the anti-sparsity filter when false.
    pub k0_filter: bool,
    pub master_seed: u64,
}

impl TrialPlan {
    pub fn new(set: SetSpec, ensemble: Ensemble, delta: f64, m_grid: Vec<usize>) -> Self {
        TrialPlan {
            set,
            ensemble,
            delta,
            m_grid,
            pairs_per_m: 200,
            trials_per_m: 20,
            k0: 1.0,
            k0_filter: true,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.set.validate()?;
        if !(self.delta > 0.0) {
            return Err(Error::invalid("delta must be positive"));
        }
        if self.m_grid.is_empty() || self.m_grid[0] == 0 || self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("m_grid must be nonempty, positive and strictly increasing"));
        }
        if self.pairs_per_m == 0 || self.trials_per_m == 0 {
            return Err(Error::invalid("pairs_per_m and trials_per_m must be at least 1"));
        }
        if !(self.k0 >= 1.0) {
            return Err(Error::invalid("k0 must be at least 1"));
        }
        Ok(())
    }

    /// Effective anti-sparsity requirement.
    pub(crate) fn k0_required(&self) -> f64 {
        if self.k0_filter {
            self.k0
        } else {
            0.0
        }
    }
}

/// One map (trial) at one `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub m: usize,
    pub trial: usize,
    pub statistic: f64,
    pub censored: bool,
    pub seed: u64,
}

/// Aggregates for one `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerMStat {
    pub m: usize,
    /// Mean over uncensored trials of the per-trial statistic; drives the slope fit.
    pub statistic: f64,
    /// Largest per-pair value over every trial.
    pub worst: f64,
    pub q90: f64,
    pub q99: f64,
    pub censored_trials: usize,
    /// True when every trial at this `M` was censored.
    pub censored: bool,
}

impl PerMStat {
    pub(crate) fn from_trials(m: usize, trials: &[TrialRecord], pair_values: &[f64]) -> Self {
        let kept: Vec<f64> = trials.iter().filter(|t| !t.censored).map(|t| t.statistic).collect();
        let censored_trials = trials.len() - kept.len();
        let statistic = if kept.is_empty() { 0.0 } else { kept.iter().sum::<f64>() / kept.len() as f64 };
        let (worst, q90, q99) = if pair_values.is_empty() {
            (0.0, 0.0, 0.0)
        } else {
            (pair_values.iter().copied().fold(f64::NEG_INFINITY, f64::max), quantile(pair_values, 0.9), quantile(pair_values, 0.99))
        };
        PerMStat { m, statistic, worst, q90, q99, censored_trials, censored: kept.is_empty() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No tolerance was declared.
    Informational,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "info",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub experiment: String,
    pub records: Vec<TrialRecord>,
    pub per_m: Vec<PerMStat>,
    /// `None` when fewer than three uncensored points remain.
    pub fit: Option<SlopeFit>,
    pub verdict: Verdict,
    pub master_seed: u64,
}

impl ExperimentResult {
    pub(crate) fn assemble(
        experiment: &str,
        records: Vec<TrialRecord>,
        per_m: Vec<PerMStat>,
        master_seed: u64,
    ) -> Self {
        let points: Vec<(f64, f64, bool)> = per_m.iter().map(|p| (p.m as f64, p.statistic, p.censored)).collect();
        ExperimentResult {
            experiment: experiment.to_string(),
            records,
            per_m,
            fit: fit_loglog_slope(&points).ok(),
            verdict: Verdict::Informational,
            master_seed,
        }
    }

    /// Sets the verdict to pass iff the fitted slope lies in `[lo, hi]`.
    pub fn judge_slope(mut self, lo: f64, hi: f64) -> Self {
        self.verdict = Verdict::from_bool(self.fit.is_some_and(|f| f.slope >= lo && f.slope <= hi));
        self
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }
}
