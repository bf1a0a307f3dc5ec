//! Measurement counts sufficient for the quasi-isometry and consistency-width
//! guarantees, up to a user constant.

use super::{width_estimate, SetSpec, StructuredConstants};
use crate::error::{Error, Result};

/// Draws for the width estimate used by the general-set formulas.
const REQUIREMENT_WIDTH_DRAWS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequirementKind {
    /// `w² / (δ² ε⁵)`.
    EmbedGeneral,
    /// `ε⁻² w̄² log(1 + ‖K‖ / (δ ε^{3/2}))`.
    EmbedStructured,
    /// `(2 + δ)⁴ w² / (δ² ε⁴)`.
    WidthGeneral,
    /// `((2 + δ)/ε) w̄² log(1 + (2 + δ)^{3/2} ‖K‖ / (δ ε^{3/2}))`.
    WidthStructured,
}

impl RequirementKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "embed-general" => Ok(RequirementKind::EmbedGeneral),
            "embed-structured" => Ok(RequirementKind::EmbedStructured),
            "width-general" => Ok(RequirementKind::WidthGeneral),
            "width-structured" => Ok(RequirementKind::WidthStructured),
            other => Err(Error::invalid(format!("unknown requirement kind '{other}'"))),
        }
    }

    pub fn is_structured(self) -> bool {
        matches!(self, RequirementKind::EmbedStructured | RequirementKind::WidthStructured)
    }
}

/// The requirement as a real number; `complexity_sq` is `w(K)²` for general
/// kinds and `w̄(K)²` for structured kinds.
pub fn minimal_m_formula(
    kind: RequirementKind,
    eps: f64,
    delta: f64,
    complexity_sq: f64,
    diameter: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let e32 = eps.powf(1.5);
    Ok(match kind {
        RequirementKind::EmbedGeneral => complexity_sq / (delta * delta * eps.powi(5)),
        RequirementKind::EmbedStructured => complexity_sq * (1.0 + diameter / (delta * e32)).ln() / (eps * eps),
        RequirementKind::WidthGeneral => (2.0 + delta).powi(4) * complexity_sq / (delta * delta * eps.powi(4)),
        RequirementKind::WidthStructured => {
            (2.0 + delta) / eps * complexity_sq * (1.0 + (2.0 + delta).powf(1.5) * diameter / (delta * e32)).ln()
        }
    })
}

/// `⌈c · formula⌉` using a width estimate (general kinds) or the closed-form
/// `w̄²` (structured kinds).
pub fn minimal_m(set: &SetSpec, kind: RequirementKind, eps: f64, delta: f64, c_const: f64) -> Result<u64> {
    if !(c_const > 0.0 && c_const.is_finite()) {
        return Err(Error::invalid("c_const must be positive"));
    }
    let complexity_sq = if kind.is_structured() {
        StructuredConstants::w_bar_sq_form(set)?
    } else {
        width_estimate(set, REQUIREMENT_WIDTH_DRAWS, 0)?.mean.powi(2)
    };
    let value = c_const * minimal_m_formula(kind, eps, delta, complexity_sq, set.diameter())?;
    Ok(value.ceil() as u64)
}
