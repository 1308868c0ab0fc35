//! Closed-form regions in the `(s, alpha)` plane, evaluated literally with the
//! displayed strict and non-strict endpoints.
//!
//! A bound whose denominator is not positive is treated as `+inf`: such a
//! bound comes from an inequality multiplied through by that denominator, and
//! it stops binding where the denominator changes sign.

use std::cmp::Ordering;

use crate::arith::Rational;

use super::ids::PredicateId;
use super::params::{ProblemParams, ScenarioError};
use super::s0::{quadratic, s0};

/// Tolerance used for the `s0` comparison when none is given.
pub fn default_s0_tol() -> Rational {
    Rational::new(1, num_traits::pow(num_bigint::BigInt::from(10), 30)).expect("nonzero")
}

/// Text form of [`default_s0_tol`].
pub const DEFAULT_S0_TOL: &str = "1/1000000000000000000000000000000";

/// `num/den`, or `None` (meaning `+inf`) when `den <= 0`.
fn ratio(num: Rational, den: &Rational) -> Option<Rational> {
    if den.is_positive() {
        Some(num.checked_div(den).expect("positive denominator"))
    } else {
        None
    }
}

fn min_ext(xs: impl IntoIterator<Item = Option<Rational>>) -> Option<Rational> {
    xs.into_iter().fold(None, |acc, x| match (acc, x) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if a <= b { a } else { b }),
    })
}

fn below(alpha: &Rational, bound: &Option<Rational>) -> bool {
    bound.as_ref().is_none_or(|b| alpha < b)
}

fn at_least(alpha: &Rational, bound: &Option<Rational>) -> bool {
    bound.as_ref().is_some_and(|b| alpha >= b)
}

fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

fn r(x: i64) -> Rational {
    Rational::int(x)
}

struct P<'a> {
    n: i64,
    s: &'a Rational,
    alpha: &'a Rational,
    gap: Rational,
}

impl<'a> P<'a> {
    fn new(p: &'a ProblemParams) -> Self {
        P { n: p.n() as i64, s: p.s(), alpha: p.alpha(), gap: p.gap() }
    }

    /// `num / (n - 2s)`; the denominator is positive for valid parameters.
    fn over_gap(&self, num: Rational) -> Rational {
        num.checked_div(&self.gap).expect("n - 2s > 0")
    }

    fn energy(&self) -> Rational {
        self.over_gap(r(4))
    }

    fn distributional(&self) -> Rational {
        self.over_gap(r(self.n) + r(2) * self.s)
    }

    /// `2s/(n - 2s)`
    fn scaling_floor(&self) -> Rational {
        self.over_gap(r(2) * self.s)
    }

    /// `n/(n-1)`
    fn dim_ratio(&self) -> Rational {
        Rational::frac(self.n, self.n - 1)
    }

    /// `(2 + 4s(1 - 1/n))/(n - 2s)`
    fn rogers_top(&self) -> Rational {
        self.over_gap(r(2) + r(4) * self.s * Rational::frac(self.n - 1, self.n))
    }

    /// `(4s + 4 - n/(n-1))/(n - 2s)`
    fn lipschitz_top(&self) -> Rational {
        self.over_gap(r(4) * self.s + r(4) - self.dim_ratio())
    }

    /// `(2s + 4 - n/(n-1))/(n - 4s)`, `+inf` when `n <= 4s`.
    fn holder_top(&self) -> Option<Rational> {
        ratio(r(2) * self.s + r(4) - self.dim_ratio(), &(r(self.n) - r(4) * self.s))
    }

    fn unit_regularity(&self) -> bool {
        self.s.is_positive() && *self.s < 1
    }
}

/// Position of `s` relative to the smaller root of the threshold quadratic,
/// decided from an enclosure of width `tol`.
fn s0_order(n: u32, s: &Rational, tol: &Rational) -> Result<Ordering, ScenarioError> {
    let e = s0(n, tol)?;
    if *s <= e.lower {
        Ok(Ordering::Less)
    } else if *s >= e.upper {
        Ok(Ordering::Greater)
    } else if quadratic(n, s).is_zero() {
        Ok(Ordering::Equal)
    } else {
        Err(ScenarioError::UndecidableAtPrecision { s: s.clone(), lo: e.lower, hi: e.upper })
    }
}

/// As [`s0_order`], shrinking the tolerance until the comparison is decided.
fn s0_order_refined(n: u32, s: &Rational) -> Ordering {
    let mut tol = Rational::frac(1, 1 << 20);
    loop {
        match s0_order(n, s, &tol) {
            Ok(o) => return o,
            Err(_) => tol = &tol * &Rational::frac(1, 1 << 20),
        }
    }
}

fn thm11(p: &P) -> bool {
    if !(3..=5).contains(&p.n) || !p.unit_regularity() {
        return false;
    }
    let lo = max(r(1), p.scaling_floor());
    let hi = min_ext([Some(p.energy()), Some(p.distributional()), Some(p.lipschitz_top())]);
    *p.alpha >= lo && below(p.alpha, &hi)
}

fn thm12(p: &P) -> bool {
    if p.n < 3 || !p.unit_regularity() || *p.alpha <= p.scaling_floor() {
        return false;
    }
    let hi = if p.n == 3 {
        if *p.s >= Rational::frac(3, 4) {
            Some(r(1))
        } else {
            min_ext([Some(r(1)), ratio(r(2) * p.s + Rational::frac(5, 2), &(r(3) - r(4) * p.s))])
        }
    } else {
        min_ext([Some(r(1)), Some(p.energy()), p.holder_top()])
    };
    below(p.alpha, &hi)
}

fn thm15(p: &P) -> bool {
    let range = match p.n {
        2 => p.unit_regularity(),
        3 => *p.s > Rational::frac(1, 4) && *p.s < Rational::frac(1, 2),
        _ => false,
    };
    range && *p.alpha == p.distributional()
}

fn thm16(p: &P, tol: &Rational) -> Result<bool, ScenarioError> {
    if *p.alpha != p.energy() || *p.s >= 1 {
        return Ok(false);
    }
    Ok(match p.n {
        3 => *p.s > Rational::frac(1, 2),
        4 => *p.s > Rational::frac(1, 3),
        n if n >= 5 => s0_order(n as u32, p.s, tol)? == Ordering::Greater,
        _ => false,
    })
}

fn kato(p: &P) -> bool {
    p.n >= 2 && p.alpha.is_positive() && below(p.alpha, &min_ext([Some(p.energy()), Some(p.over_gap(r(2) + r(2) * p.s))]))
}

fn furioli_terraneo(p: &P) -> bool {
    let lo = max(r(1), p.scaling_floor());
    let hi = min_ext([
        Some(p.over_gap(r(2) + r(4) * p.s)),
        Some(p.energy()),
        Some(p.distributional()),
        Some(p.over_gap(r(p.n) + r(2) - r(2) * p.s)),
    ]);
    p.n >= 3 && *p.alpha > lo && below(p.alpha, &hi)
}

fn rogers(p: &P) -> bool {
    let lo = p.over_gap(r(2) + r(2) * p.s);
    let hi = min_ext([Some(p.rogers_top()), Some(p.energy())]);
    p.n >= 3 && *p.alpha >= lo && below(p.alpha, &hi)
}

fn win_tsutsumi_sub(p: &P) -> bool {
    if p.n != 3 || *p.s <= Rational::frac(1, 2) || *p.s >= 1 {
        return false;
    }
    let lo = max(p.rogers_top(), p.over_gap(r(p.n) + r(2) - r(2) * p.s));
    let hi = min_ext([Some(p.energy()), Some(p.distributional())]);
    *p.alpha >= lo && below(p.alpha, &hi)
}

fn win_tsutsumi_crit(p: &P) -> bool {
    let range = match p.n {
        3 => *p.s > Rational::frac(1, 2) && *p.s < 1,
        4 | 5 => *p.s >= Rational::frac(1, 2) && *p.s < 1,
        _ => false,
    };
    range && *p.alpha == p.energy()
}

fn cazenave_crit(p: &P) -> bool {
    let crit = Rational::min_of(&p.energy(), &p.distributional()).clone();
    p.n >= 3 && *p.s >= 1 && *p.alpha == crit
}

fn open_sub(p: &P) -> bool {
    if p.s.is_negative() || *p.s >= 1 {
        return false;
    }
    let case_a = (p.n == 3 || p.n == 4) && {
        let lo = min_ext([Some(p.lipschitz_top()), p.holder_top()]);
        at_least(p.alpha, &lo) && below(p.alpha, &min_ext([Some(p.energy()), Some(p.distributional())]))
    };
    let case_b = p.n >= 5 && at_least(p.alpha, &p.holder_top()) && *p.alpha < p.energy();
    let case_c = p.n >= 3
        && p.s.is_zero()
        && *p.alpha >= Rational::frac(2, p.n)
        && *p.alpha < (r(4) - p.dim_ratio()).checked_div(&r(p.n)).expect("n > 0");
    case_a || case_b || case_c
}

fn open_crit(p: &P) -> bool {
    if p.s.is_negative() || *p.s >= 1 {
        return false;
    }
    match p.n {
        2 => p.s.is_zero() && *p.alpha == 1,
        3 => *p.alpha == p.distributional() && (*p.s <= Rational::frac(1, 4) || *p.s == Rational::frac(1, 2)),
        4 => *p.alpha == p.energy() && *p.s <= Rational::frac(1, 3),
        n => *p.alpha == p.energy() && s0_order_refined(n as u32, p.s) != Ordering::Greater,
    }
}

/// Theorem regions, comparing against `s0` with an enclosure of width `tol`.
pub fn theorem_predicate_with_tol(id: PredicateId, p: &ProblemParams, tol: &Rational) -> Result<bool, ScenarioError> {
    let v = P::new(p);
    match id {
        PredicateId::Thm11 => Ok(thm11(&v)),
        PredicateId::Thm12 => Ok(thm12(&v)),
        PredicateId::Thm15 => Ok(thm15(&v)),
        PredicateId::Thm16 => thm16(&v, tol),
        other => Err(ScenarioError::Unsupported(other.to_string(), "theorem predicates")),
    }
}

pub fn theorem_predicate(id: PredicateId, p: &ProblemParams) -> Result<bool, ScenarioError> {
    theorem_predicate_with_tol(id, p, &default_s0_tol())
}

/// Earlier results and the open-case lists.
pub fn literature_predicate(id: PredicateId, p: &ProblemParams) -> Result<bool, ScenarioError> {
    let v = P::new(p);
    Ok(match id {
        PredicateId::Kato => kato(&v),
        PredicateId::FurioliTerraneo => furioli_terraneo(&v),
        PredicateId::Rogers => rogers(&v),
        PredicateId::WinTsutsumiSub => win_tsutsumi_sub(&v),
        PredicateId::WinTsutsumiCrit => win_tsutsumi_crit(&v),
        PredicateId::CazenaveCrit => cazenave_crit(&v),
        PredicateId::OpenSub => open_sub(&v),
        PredicateId::OpenCrit => open_crit(&v),
        other => return Err(ScenarioError::Unsupported(other.to_string(), "literature predicates")),
    })
}

/// Any predicate.
pub fn predicate(id: PredicateId, p: &ProblemParams) -> Result<bool, ScenarioError> {
    if id.is_theorem() {
        theorem_predicate(id, p)
    } else {
        literature_predicate(id, p)
    }
}
