use serde::Serialize;

use crate::arith::{Bound, IntervalSet, Rational};
use crate::constraints::VarId;

use super::build::build_scenario;
use super::ids::ScenarioId;
use super::params::{ProblemParams, ScenarioError};

fn above(x: Rational, closed: bool) -> IntervalSet {
    let lo = if closed { Bound::closed(x) } else { Bound::open(x) };
    IntervalSet::from_bounds(lo, Bound::pos_inf())
}

fn below(x: Rational, closed: bool) -> IntervalSet {
    let hi = if closed { Bound::closed(x) } else { Bound::open(x) };
    IntervalSet::from_bounds(Bound::neg_inf(), hi)
}

fn all_of(parts: Vec<IntervalSet>) -> IntervalSet {
    parts.into_iter().fold(IntervalSet::full(), |acc, p| acc.intersect(&p))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// The sigma-window stated in closed form for each scenario, with endpoint
/// strictness exactly as displayed. For critical scenarios whose sigma is an
/// explicit choice, this is the image of that choice over its free parameter.
pub fn closed_form_window(id: ScenarioId, p: &ProblemParams) -> Result<IntervalSet, ScenarioError> {
    build_scenario(id, p)?;
    let n = p.n() as i64;
    let s = p.s().clone();
    let alpha = p.alpha().clone();
    let power = p.gap() * &alpha;
    let zero = Rational::zero;
    let w = match id {
        ScenarioId::SubcriticalUsual => all_of(vec![
            above(-&s, true),
            above(&s - q(n, 2 * (n - 1)) - q(n - 2, 4 * (n - 1)) * &power, true),
            below(&s + q(n, 2 * (n - 1)) - q(n, 4 * (n - 1)) * &power, true),
            above(&s - q(1, 2) - q(1, 4) * &power, false),
            above(&s - q(1, 2) * &power, false),
            above(&s - q(n, 2), false),
            below(zero(), false),
            below(&s + q(1, 2) - q(1, 4) * &power, false),
        ]),
        ScenarioId::SubcriticalBetter => all_of(vec![
            above(-&s, true),
            above(&s + q(3 * n - 4, 2 * n - 2) - q(3 * n - 4, 4 * n - 4) * &power, true),
            below(zero(), false),
            below(&s + q(3 * n - 4, 2 * n - 2) - q(1, 2) * &power, false),
        ]),
        ScenarioId::HolderUsual => all_of(vec![
            above(&s - q(1, 2) * &power, false),
            above(&s - q(n, 2), false),
            above(-(&alpha * &s), false),
            below(zero(), false),
            above(&s - q(n, 2 * (n - 1)) - q(n - 2, 4 * (n - 1)) * &power, true),
            below(&s + q(n, 2 * (n - 1)) - q(n, 4 * (n - 1)) * &power, true),
        ]),
        ScenarioId::HolderBetter => all_of(vec![
            above(&s + Rational::int(2) - &power, false),
            above(-(&alpha * &s), false),
            below(&s + Rational::int(2) - q(1, 2) * &power - q(n, 2 * (n - 1)), false),
            above(&s + Rational::int(2) - q(n, 2 * (n - 1)) - q(3 * n - 4, 4 * (n - 1)) * &power, false),
            below(zero(), false),
        ]),
        ScenarioId::CriticalN2Low => all_of(vec![above(-&s, false), below(zero(), false)]),
        ScenarioId::CriticalN2High => all_of(vec![above(&s - Rational::one(), false), below(zero(), false)]),
        ScenarioId::CriticalN3Mass => IntervalSet::point(-&s),
        ScenarioId::CriticalN3Energy => IntervalSet::point(&s - Rational::one()),
        ScenarioId::CriticalHighDim => {
            let floor = if alpha >= 1 { above(-&s, true) } else { above(-(&alpha * &s), false) };
            all_of(vec![
                floor,
                below(zero(), false),
                above(&s - q(3 * n - 4, 2 * (n - 1)), false),
                below(&s - q(n, 2 * (n - 1)), false),
            ])
        }
    };
    Ok(w)
}

/// Engine projection of a scenario onto sigma beside the closed-form window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaWindow {
    #[serde(serialize_with = "ser_set")]
    pub engine: IntervalSet,
    #[serde(serialize_with = "ser_set")]
    pub closed_form: IntervalSet,
    pub agree: bool,
    /// The two sets have the same endpoint values and differ, if at all, only
    /// in whether endpoints are included.
    pub same_endpoints: bool,
}

fn ser_set<S: serde::Serializer>(set: &IntervalSet, ser: S) -> Result<S::Ok, S::Error> {
    set.endpoints().serialize(ser)
}

fn endpoint_values(set: &IntervalSet) -> Vec<String> {
    set.endpoints().into_iter().map(|(v, _)| v).collect()
}

pub fn sigma_window(id: ScenarioId, p: &ProblemParams) -> Result<SigmaWindow, ScenarioError> {
    let engine = build_scenario(id, p)?.project_interval(VarId::Sigma);
    let closed_form = closed_form_window(id, p)?;
    let agree = engine == closed_form;
    let same_endpoints = endpoint_values(&engine) == endpoint_values(&closed_form);
    Ok(SigmaWindow { engine, closed_form, agree, same_endpoints })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, s: &str, alpha: &str) -> ProblemParams {
        ProblemParams::new(n, s.parse().unwrap(), alpha.parse().unwrap()).unwrap()
    }

    #[test]
    fn reference_point_agrees() {
        let w = sigma_window(ScenarioId::SubcriticalUsual, &params(3, "1/2", "3/2")).unwrap();
        assert_eq!(w.closed_form.to_string(), "[-1/2, 0)");
        assert!(w.agree);
    }

    #[test]
    fn better_regularity_closed_form() {
        // n = 4, s = 1/2, alpha = 3/2: (n-2s) alpha = 9/2, so the window is
        // max{-1/2, 1/2 + 4/3 - (2/3)(9/2)} <= sigma < min{0, 1/2 + 4/3 - 9/4}.
        let w = closed_form_window(ScenarioId::SubcriticalBetter, &params(4, "1/2", "3/2")).unwrap();
        assert_eq!(w.to_string(), "[-1/2, -5/12)");
    }

    #[test]
    fn guard_violation_is_an_error() {
        assert!(sigma_window(ScenarioId::HolderUsual, &params(3, "1/2", "3/2")).is_err());
    }
}
