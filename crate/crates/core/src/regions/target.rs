use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::scenarios::{build_scenario, literature_predicate, theorem_predicate_with_tol, PredicateId, ProblemParams, ScenarioError, ScenarioId};

use super::RegionError;

/// Something a grid cell can be evaluated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Scenario(ScenarioId),
    Predicate(PredicateId),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Scenario(id) => write!(f, "{id}"),
            Target::Predicate(id) => write!(f, "{id}"),
        }
    }
}

impl FromStr for Target {
    type Err = RegionError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        if let Ok(id) = t.parse::<ScenarioId>() {
            return Ok(Target::Scenario(id));
        }
        t.parse::<PredicateId>().map(Target::Predicate).map_err(|_| RegionError::UnknownTarget(t.to_string()))
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl From<ScenarioId> for Target {
    fn from(id: ScenarioId) -> Self {
        Target::Scenario(id)
    }
}

impl From<PredicateId> for Target {
    fn from(id: PredicateId) -> Self {
        Target::Predicate(id)
    }
}

/// Cell status. `NotApplicable` marks a failed scenario guard or a point
/// outside the parameter domain, kept apart from `False` (infeasible).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    True,
    False,
    NotApplicable,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::True
        } else {
            Status::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Status::True
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::True => "T",
            Status::False => "F",
            Status::NotApplicable => "NA",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(self.as_str())
    }
}

/// Evaluates a theorem predicate, tightening the `s0` enclosure until the
/// comparison is decided. `s0` is irrational or an exact root, so this ends.
fn decided_theorem(id: PredicateId, p: &ProblemParams) -> bool {
    let step = Rational::frac(1, 1 << 30);
    let mut tol = Rational::frac(1, 1 << 20);
    loop {
        match theorem_predicate_with_tol(id, p, &tol) {
            Ok(b) => return b,
            Err(ScenarioError::UndecidableAtPrecision { .. }) => tol = &tol * &step,
            Err(e) => panic!("theorem predicate {id}: {e}"),
        }
    }
}

impl Target {
    /// Exact status at `(n, s, alpha)`.
    pub fn eval(self, n: u32, s: &Rational, alpha: &Rational) -> Status {
        let Ok(p) = ProblemParams::new(n, s.clone(), alpha.clone()) else {
            return Status::NotApplicable;
        };
        match self {
            Target::Scenario(id) => match build_scenario(id, &p) {
                Ok(sys) => Status::from_bool(sys.is_feasible().feasible),
                Err(_) => Status::NotApplicable,
            },
            Target::Predicate(id) if id.is_theorem() => Status::from_bool(decided_theorem(id, &p)),
            Target::Predicate(id) => Status::from_bool(literature_predicate(id, &p).expect("literature id")),
        }
    }
}

/// Closed-form side conditions used to restrict a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `alpha < 4/(n - 2s)`
    BelowEnergy,
    /// `alpha > 2s/(n - 2s)`
    AboveScalingFloor,
}

impl Condition {
    pub fn holds(self, n: u32, s: &Rational, alpha: &Rational) -> bool {
        let gap = Rational::int(n as i64) - Rational::int(2) * s;
        if !gap.is_positive() {
            return false;
        }
        match self {
            Condition::BelowEnergy => *alpha < Rational::int(4).checked_div(&gap).expect("positive"),
            Condition::AboveScalingFloor => *alpha > (Rational::int(2) * s).checked_div(&gap).expect("positive"),
        }
    }
}

/// Boolean combination of targets and side conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Is(Target),
    Any(Vec<Region>),
    All(Vec<Region>),
    Not(Box<Region>),
    Where(Condition),
}

impl Region {
    pub fn any(ts: impl IntoIterator<Item = impl Into<Target>>) -> Self {
        Region::Any(ts.into_iter().map(|t| Region::Is(t.into())).collect())
    }

    pub fn and(self, other: Region) -> Self {
        Region::All(vec![self, other])
    }

    pub fn complement(self) -> Self {
        Region::Not(Box::new(self))
    }

    /// Targets the region reads.
    pub fn targets(&self) -> Vec<Target> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Target>) {
        match self {
            Region::Is(t) => {
                if !out.contains(t) {
                    out.push(*t)
                }
            }
            Region::Any(rs) | Region::All(rs) => rs.iter().for_each(|r| r.collect(out)),
            Region::Not(r) => r.collect(out),
            Region::Where(_) => {}
        }
    }

    /// Membership given a lookup for target statuses. Only `True` counts as
    /// membership, so not-applicable cells lie outside every region.
    pub fn contains_with(&self, n: u32, s: &Rational, alpha: &Rational, status: &mut impl FnMut(Target) -> Status) -> bool {
        match self {
            Region::Is(t) => status(*t).is_true(),
            Region::Any(rs) => rs.iter().any(|r| r.contains_with(n, s, alpha, status)),
            Region::All(rs) => rs.iter().all(|r| r.contains_with(n, s, alpha, status)),
            Region::Not(r) => !r.contains_with(n, s, alpha, status),
            Region::Where(c) => c.holds(n, s, alpha),
        }
    }

    /// Membership evaluated directly at an arbitrary point.
    pub fn contains(&self, n: u32, s: &Rational, alpha: &Rational) -> bool {
        self.contains_with(n, s, alpha, &mut |t| t.eval(n, s, alpha))
    }
}

impl From<Target> for Region {
    fn from(t: Target) -> Self {
        Region::Is(t)
    }
}

impl From<ScenarioId> for Region {
    fn from(id: ScenarioId) -> Self {
        Region::Is(id.into())
    }
}

impl From<PredicateId> for Region {
    fn from(id: PredicateId) -> Self {
        Region::Is(id.into())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, rs: &[Region], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, r) in rs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, ")")
        };
        match self {
            Region::Is(t) => write!(f, "{t}"),
            Region::Any(rs) => join(f, rs, "|"),
            Region::All(rs) => join(f, rs, "&"),
            Region::Not(r) => write!(f, "!{r}"),
            Region::Where(Condition::BelowEnergy) => write!(f, "alpha < 4/(n-2s)"),
            Region::Where(Condition::AboveScalingFloor) => write!(f, "alpha > 2s/(n-2s)"),
        }
    }
}
