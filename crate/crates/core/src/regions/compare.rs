use std::collections::HashMap;

use serde::Serialize;

use crate::arith::Rational;

use super::grid::RegionGrid;
use super::target::{Region, Status, Target};
use super::trace::{trace_alpha, trace_s, Bracket};
use super::RegionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    /// Flag every cell where membership differs.
    Equality,
    /// Flag cells in `a` but not in `b`.
    Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub s: Rational,
    pub alpha: Rational,
    pub a: Status,
    pub b: Status,
    /// Upper bound on the distance to the nearest traced boundary of either
    /// region, along either axis through the cell. `None` when no boundary
    /// was found in the grid's ranges.
    pub distance: Option<Rational>,
}

impl Mismatch {
    /// Within `limit` of a traced boundary.
    pub fn near_boundary(&self, limit: &Rational) -> bool {
        self.distance.as_ref().is_some_and(|d| d <= limit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    pub mode: CompareMode,
    pub a: String,
    pub b: String,
    pub mismatches: Vec<Mismatch>,
}

impl MismatchReport {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Mismatches farther than `limit` from every traced boundary.
    pub fn interior(&self, limit: &Rational) -> Vec<&Mismatch> {
        self.mismatches.iter().filter(|m| !m.near_boundary(limit)).collect()
    }
}

fn side_status(region: &Region, member: bool, statuses: &dyn Fn(Target) -> Status) -> Status {
    match region {
        Region::Is(t) => statuses(*t),
        _ => Status::from_bool(member),
    }
}

/// Cell-by-cell comparison of two regions over a scanned grid.
pub fn compare(grid: &RegionGrid, a: &Region, b: &Region, mode: CompareMode) -> Result<MismatchReport, RegionError> {
    for t in a.targets().into_iter().chain(b.targets()) {
        if grid.column(t).is_none() {
            return Err(RegionError::MissingTarget(t.to_string()));
        }
    }
    let n = grid.spec.n;
    let step = &grid.spec.step;
    let tol = step * &Rational::frac(1, 1024);
    let (s_lo, s_hi) = (&grid.spec.s_range.0, &grid.spec.s_range.1);
    let (a_lo, a_hi) = (&grid.spec.alpha_range.0, &grid.spec.alpha_range.1);
    let mut by_s: HashMap<Rational, Vec<Bracket>> = HashMap::new();
    let mut by_alpha: HashMap<Rational, Vec<Bracket>> = HashMap::new();
    let mut mismatches = Vec::new();
    for cell in &grid.cells {
        let lookup = |t: Target| cell.statuses[grid.column(t).expect("checked")];
        let in_a = a.contains_with(n, &cell.s, &cell.alpha, &mut |t| lookup(t));
        let in_b = b.contains_with(n, &cell.s, &cell.alpha, &mut |t| lookup(t));
        let differs = match mode {
            CompareMode::Equality => in_a != in_b,
            CompareMode::Subset => in_a && !in_b,
        };
        if !differs {
            continue;
        }
        let along_alpha = by_s.entry(cell.s.clone()).or_insert_with(|| {
            let mut v = trace_alpha(n, a, &cell.s, (a_lo, a_hi), step, &tol);
            v.extend(trace_alpha(n, b, &cell.s, (a_lo, a_hi), step, &tol));
            v
        });
        let da = along_alpha.iter().map(|br| br.distance_bound(&cell.alpha)).min();
        let along_s = by_alpha.entry(cell.alpha.clone()).or_insert_with(|| {
            let mut v = trace_s(n, a, &cell.alpha, (s_lo, s_hi), step, &tol);
            v.extend(trace_s(n, b, &cell.alpha, (s_lo, s_hi), step, &tol));
            v
        });
        let ds = along_s.iter().map(|br| br.distance_bound(&cell.s)).min();
        let distance = [da, ds].into_iter().flatten().min();
        mismatches.push(Mismatch {
            s: cell.s.clone(),
            alpha: cell.alpha.clone(),
            a: side_status(a, in_a, &lookup),
            b: side_status(b, in_b, &lookup),
            distance,
        });
    }
    Ok(MismatchReport { mode, a: a.to_string(), b: b.to_string(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{scan, GridSpec};
    use crate::scenarios::PredicateId;

    fn r(t: &str) -> Rational {
        t.parse().unwrap()
    }

    fn grid() -> RegionGrid {
        let spec = GridSpec::new(3, (r("0"), r("1")), (r("0"), r("4")), r("1/8")).unwrap();
        scan(&spec, &[PredicateId::Thm11.into(), PredicateId::Thm12.into(), PredicateId::Rogers.into(), PredicateId::Kato.into()])
    }

    #[test]
    fn reflexive_and_subset() {
        let g = grid();
        let thm = Region::any([PredicateId::Thm11, PredicateId::Thm12]);
        assert!(compare(&g, &PredicateId::Thm11.into(), &PredicateId::Thm11.into(), CompareMode::Equality).unwrap().is_empty());
        assert!(compare(&g, &PredicateId::Rogers.into(), &thm, CompareMode::Subset).unwrap().is_empty());
    }

    #[test]
    fn mismatches_carry_distances() {
        let g = grid();
        let rep = compare(&g, &PredicateId::Kato.into(), &PredicateId::Thm11.into(), CompareMode::Equality).unwrap();
        let at = |alpha: &str| rep.mismatches.iter().find(|m| m.s == r("1/2") && m.alpha == r(alpha)).unwrap();
        let edge = at("3/2");
        assert_eq!((edge.a, edge.b), (Status::False, Status::True));
        assert!(edge.near_boundary(&r("1/1024")));
        let inner = at("1/2");
        assert_eq!((inner.a, inner.b), (Status::True, Status::False));
        let d = inner.distance.clone().unwrap();
        assert!(d >= r("1/2") && d <= r("1/2") + r("1/8"));
        assert!(!rep.interior(&r("1/8")).is_empty());
    }

    #[test]
    fn missing_target_is_reported() {
        let g = grid();
        assert!(matches!(
            compare(&g, &PredicateId::OpenSub.into(), &PredicateId::Thm11.into(), CompareMode::Equality),
            Err(RegionError::MissingTarget(_))
        ));
    }
}
