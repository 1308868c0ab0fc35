use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;

/// A rational extended by the two infinities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::PosInf => f.write_str("+inf"),
            ExtRational::Finite(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closedness {
    Open,
    Closed,
}

impl Closedness {
    pub fn is_closed(self) -> bool {
        self == Closedness::Closed
    }

    /// `Closed` only when both sides are closed.
    pub fn stricter(self, other: Closedness) -> Closedness {
        if self.is_closed() && other.is_closed() {
            Closedness::Closed
        } else {
            Closedness::Open
        }
    }

    pub fn looser(self, other: Closedness) -> Closedness {
        if self.is_closed() || other.is_closed() {
            Closedness::Closed
        } else {
            Closedness::Open
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Closedness::Open => "open",
            Closedness::Closed => "closed",
        }
    }
}

/// Interval endpoint. Infinite endpoints are always open.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bound {
    value: ExtRational,
    closedness: Closedness,
}

impl Bound {
    pub fn new(value: ExtRational, closedness: Closedness) -> Self {
        let closedness = if value.is_finite() { closedness } else { Closedness::Open };
        Bound { value, closedness }
    }

    pub fn closed(r: Rational) -> Self {
        Bound::new(ExtRational::Finite(r), Closedness::Closed)
    }

    pub fn open(r: Rational) -> Self {
        Bound::new(ExtRational::Finite(r), Closedness::Open)
    }

    pub fn neg_inf() -> Self {
        Bound::new(ExtRational::NegInf, Closedness::Open)
    }

    pub fn pos_inf() -> Self {
        Bound::new(ExtRational::PosInf, Closedness::Open)
    }

    pub fn value(&self) -> &ExtRational {
        &self.value
    }

    pub fn closedness(&self) -> Closedness {
        self.closedness
    }

    pub fn is_closed(&self) -> bool {
        self.closedness.is_closed()
    }

    /// The more restrictive of two lower endpoints.
    pub fn tighter_lower(&self, other: &Bound) -> Bound {
        if self.cmp_as_lower(other) == Ordering::Less { other.clone() } else { self.clone() }
    }

    /// The more restrictive of two upper endpoints.
    pub fn tighter_upper(&self, other: &Bound) -> Bound {
        if self.cmp_as_upper(other) == Ordering::Greater { other.clone() } else { self.clone() }
    }

    // Order lower endpoints by the set they cut off: a closed lower bound admits more.
    fn cmp_as_lower(&self, other: &Bound) -> Ordering {
        self.value.cmp(&other.value).then_with(|| match (self.is_closed(), other.is_closed()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => Ordering::Equal,
        })
    }

    fn cmp_as_upper(&self, other: &Bound) -> Ordering {
        self.value.cmp(&other.value).then_with(|| match (self.is_closed(), other.is_closed()) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    fn admits_from_below(&self, x: &Rational) -> bool {
        match &self.value {
            ExtRational::NegInf => true,
            ExtRational::PosInf => false,
            ExtRational::Finite(v) => v < x || (self.is_closed() && v == x),
        }
    }

    fn admits_from_above(&self, x: &Rational) -> bool {
        match &self.value {
            ExtRational::PosInf => true,
            ExtRational::NegInf => false,
            ExtRational::Finite(v) => x < v || (self.is_closed() && v == x),
        }
    }
}

/// A single nonempty interval.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    /// `None` when the bounds describe the empty set.
    pub fn new(lo: Bound, hi: Bound) -> Option<Self> {
        let nonempty = match lo.value.cmp(&hi.value) {
            Ordering::Less => true,
            Ordering::Equal => lo.is_closed() && hi.is_closed(),
            Ordering::Greater => false,
        };
        nonempty.then_some(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: Bound::closed(x.clone()), hi: Bound::closed(x) }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.admits_from_below(x) && self.hi.admits_from_above(x)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.tighter_lower(&other.lo), self.hi.tighter_upper(&other.hi))
    }

    // True when the union of the two (with self starting first) is a single interval.
    fn touches(&self, next: &Interval) -> bool {
        match next.lo.value.cmp(&self.hi.value) {
            Ordering::Less => true,
            Ordering::Equal => self.hi.is_closed() || next.lo.is_closed(),
            Ordering::Greater => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo.is_closed() { '[' } else { '(' };
        let r = if self.hi.is_closed() { ']' } else { ')' };
        if self.lo.value == self.hi.value {
            return write!(f, "{{{}}}", self.lo.value);
        }
        write!(f, "{l}{}, {}{r}", self.lo.value, self.hi.value)
    }
}

/// Canonical union of intervals: sorted, disjoint, non-adjacent.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet::from_interval(Interval { lo: Bound::neg_inf(), hi: Bound::pos_inf() })
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet { intervals: vec![iv] }
    }

    /// Builds from raw bounds; an empty pair yields the empty set.
    pub fn from_bounds(lo: Bound, hi: Bound) -> Self {
        IntervalSet::canonicalize(Interval::new(lo, hi).into_iter().collect())
    }

    pub fn point(x: Rational) -> Self {
        IntervalSet::from_interval(Interval::point(x))
    }

    /// Sorts and merges arbitrary intervals into canonical form.
    pub fn canonicalize(mut ivs: Vec<Interval>) -> Self {
        ivs.sort_by(|a, b| a.lo.cmp_as_lower(&b.lo).then_with(|| a.hi.cmp_as_upper(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(last) if last.touches(&iv) => {
                    if iv.hi.cmp_as_upper(&last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    parts.push(c);
                }
            }
        }
        IntervalSet::canonicalize(parts)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::canonicalize(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    /// Flat list of endpoints, two per interval, as `(value, closedness)`.
    pub fn endpoints(&self) -> Vec<(String, Closedness)> {
        self.intervals
            .iter()
            .flat_map(|iv| {
                [
                    (iv.lo.value.to_string(), iv.lo.closedness),
                    (iv.hi.value.to_string(), iv.hi.closedness),
                ]
            })
            .collect()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
