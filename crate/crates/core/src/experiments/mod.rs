//! Monte Carlo experiments: decay sweeps, lemma checks, counterexamples and
//! the binomial/Stirling combinatorics.

mod baseline;
mod combinatorics;
mod counterexamples;
mod fit;
mod lemmas;
mod plan;
pub mod report;
mod sweeps;

pub use baseline::{linear_baseline, BaselineReport};
pub use combinatorics::{
    bernoulli_floor_distortion, de_moivre_mad, stirling_gosper_check, stirling_remainder, BinomialMadReport,
    StirlingReport, MAD_GAP_CONSTANT,
};
pub use counterexamples::{
    no_dither_counterexample, bernoulli_floor_check, gaussian_contrast, NoDitherReport, BernoulliFloorReport,
};
pub use fit::{fit_loglog_slope, SlopeFit};
pub use lemmas::{
    expectation_identity, expectation_check, diameter_check, chernoff_check,
    ExpectationReport, DiameterReport, ChernoffReport, DIAMETER_FACTOR,
};
pub use plan::{ExperimentResult, PerMStat, TrialPlan, TrialRecord, Verdict};
pub use sweeps::{consistency_width_sweep, pair_distortion, quasi_isometry_sweep};
