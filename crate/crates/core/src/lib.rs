//! Dithered quantized random embeddings `A(x) = Q(Φx + ξ)` with a Monte Carlo
//! laboratory that measures how their distortions and consistency widths decay.
//!
//! The crate is organised bottom-up:
//!
//! - [`ensembles`]: sub-Gaussian entry distributions, their constants, and sensing matrices.
//! - [`quantizer`]: the uniform scalar quantizer, dithering, and the frozen map `A`.
//! - [`distances`]: the code pseudo-distance `D`, its softened variants `D^t`,
//!   and per-coordinate threshold counting.
//! - [`geometry`]: low-complexity sets, Gaussian mean width, entropy bounds,
//!   anti-sparsity, and measurement-count requirements.
//! - [`experiments`]: decay sweeps, lemma-level checks, counterexamples and
//!   the binomial/Stirling combinatorics.
//! - [`reference`]: brute-force oracles used to cross-check the closed forms.
//! - [`selftest`]: the acceptance catalogue, also reachable from the CLI.
//! - [`vectors`]: plain-text vector input and output.
//! - [`cli`]: the `qembed` command-line front end.

pub mod cli;
pub mod distances;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod quantizer;
pub mod reference;
pub mod rng;
pub mod selftest;
pub mod stats;
pub mod vectors;

pub use distances::{
    hyperplane_count, softening_check, pseudo_distance, soft_count_1d, soft_distance_report,
    soft_pseudo_distance, SoftDistanceReport, ThresholdCount,
};
pub use ensembles::{sample_matrix, Ensemble, EnsembleKind, KappaSource, SensingMatrix};
pub use error::{Error, Result};
pub use geometry::{SetSpec, WidthEstimate};
pub use quantizer::{Dither, QuantizedCode, QuantizedMap, QuantizerConfig, QuantizerVariant};
pub use stats::Estimate;

/// `√(2/π)`, the first absolute moment of a standard normal variable.
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
