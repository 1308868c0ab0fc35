use serde::Serialize;

use crate::arith::Rational;

use super::params::ScenarioError;

/// `P(s) = 4(n-1)s^2 - (2n^2+8n-8)s + n^2`, whose smaller root is the
/// regularity threshold on the energy-critical curve for `n >= 5`.
pub fn quadratic(n: u32, s: &Rational) -> Rational {
    let n = n as i64;
    Rational::int(4 * (n - 1)) * s * s - Rational::int(2 * n * n + 8 * n - 8) * s + Rational::int(n * n)
}

/// Rational bracket of the smaller root with `P(lower) > 0 > P(upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S0Enclosure {
    pub n: u32,
    pub lower: Rational,
    pub upper: Rational,
}

impl S0Enclosure {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    /// Whether the sign pattern still certifies a root between the ends.
    pub fn certified(&self) -> bool {
        quadratic(self.n, &self.lower).is_positive() && quadratic(self.n, &self.upper).is_negative()
    }
}

/// Bisects from `[0, n^2/(2n^2+8n-8)]`, doubling the upper end until `P`
/// turns negative. One doubling always suffices and stays below the vertex,
/// so the bracket never contains the larger root.
pub fn s0(n: u32, tol: &Rational) -> Result<S0Enclosure, ScenarioError> {
    if n < 5 {
        return Err(ScenarioError::Unsupported("s0".into(), "n >= 5"));
    }
    if !tol.is_positive() {
        return Err(ScenarioError::InvalidParams(format!("tolerance {tol} must be positive")));
    }
    let nn = n as i64;
    let mut lo = Rational::zero();
    let mut hi = Rational::frac(nn * nn, 2 * nn * nn + 8 * nn - 8);
    while !quadratic(n, &hi).is_negative() {
        hi = &hi + &hi;
    }
    while &hi - &lo > *tol {
        let mid = Rational::midpoint(&lo, &hi);
        let p = quadratic(n, &mid);
        if p.is_zero() {
            // A rational root is enclosed by any neighbourhood; shrink onto it.
            let half = tol.clone() * Rational::frac(1, 2);
            lo = &mid - &half;
            hi = &mid + &half;
            break;
        } else if p.is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(S0Enclosure { n, lower: lo, upper: hi })
}
