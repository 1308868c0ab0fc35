use serde::{Deserialize, Serialize};

use crate::arith::Rational;

use super::ids::ScenarioId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{scenario} does not apply: requires {guard}")]
    NotApplicable { scenario: ScenarioId, guard: &'static str },
    #[error("{0} is not affine in s along its critical curve")]
    NotAffineInS(ScenarioId),
    #[error("{0} is only defined for {1}")]
    Unsupported(String, &'static str),
    #[error("s = {s} lies inside the s0 enclosure [{lo}, {hi}]; retry with a smaller tolerance")]
    UndecidableAtPrecision { s: Rational, lo: Rational, hi: Rational },
}

/// Dimension `n`, regularity `s`, and nonlinearity power `alpha`.
///
/// `s = 0` is accepted so that parameter grids can include the axis; every
/// scenario guard and theorem region excludes it on its own terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemParams {
    n: u32,
    s: Rational,
    alpha: Rational,
}

impl ProblemParams {
    pub fn new(n: u32, s: Rational, alpha: Rational) -> Result<Self, ScenarioError> {
        if n < 2 {
            return Err(ScenarioError::InvalidParams(format!("n = {n} must be at least 2")));
        }
        if s.is_negative() || s >= Rational::frac(n as i64, 2) {
            return Err(ScenarioError::InvalidParams(format!("s = {s} must lie in [0, n/2)")));
        }
        if !alpha.is_positive() {
            return Err(ScenarioError::InvalidParams(format!("alpha = {alpha} must be positive")));
        }
        Ok(ProblemParams { n, s, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// `n - 2s`, positive by construction.
    pub fn gap(&self) -> Rational {
        Rational::int(self.n as i64) - Rational::int(2) * &self.s
    }

    /// The energy-critical power `4/(n - 2s)`.
    pub fn energy_critical(&self) -> Rational {
        Rational::int(4).checked_div(&self.gap()).expect("n - 2s > 0")
    }

    /// The distributional threshold `(n + 2s)/(n - 2s)`.
    pub fn distributional_critical(&self) -> Rational {
        (Rational::int(self.n as i64) + Rational::int(2) * &self.s).checked_div(&self.gap()).expect("n - 2s > 0")
    }
}
