//! Equality substitution, Fourier-Motzkin elimination, witnesses, projection.

use std::collections::HashMap;

use crate::arith::{Bound, IntervalSet, Rational};

use super::types::{Constraint, ConstraintError, ConstraintSystem, ExponentAssignment, LinExpr, Relation, VarId, Verdict};

/// Set of original constraint indices a derived row depends on.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct Prov(Vec<u64>);

impl Prov {
    fn single(i: usize) -> Self {
        let mut bits = vec![0u64; i / 64 + 1];
        bits[i / 64] |= 1 << (i % 64);
        Prov(bits)
    }

    fn union(&self, other: &Prov) -> Prov {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut bits = long.0.clone();
        for (b, o) in bits.iter_mut().zip(&short.0) {
            *b |= o;
        }
        Prov(bits)
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }
}

/// Dense row `coef . x + c REL 0`.
#[derive(Clone, Debug)]
struct Row {
    coef: Vec<Rational>,
    c: Rational,
    rel: Relation,
    prov: Prov,
}

impl Row {
    fn is_constant(&self) -> bool {
        self.coef.iter().all(Rational::is_zero)
    }

    fn constant_holds(&self) -> bool {
        self.rel.holds(&self.c)
    }

    fn scale(&self, k: &Rational) -> Row {
        Row {
            coef: self.coef.iter().map(|a| a * k).collect(),
            c: &self.c * k,
            rel: self.rel,
            prov: self.prov.clone(),
        }
    }

    /// `self + k * other`, strict if either is strict.
    fn add_scaled(&self, k: &Rational, other: &Row) -> Row {
        let rel = match (self.rel, other.rel) {
            (Relation::Lt, _) | (_, Relation::Lt) => Relation::Lt,
            (Relation::Eq, Relation::Eq) => Relation::Eq,
            _ => Relation::Le,
        };
        Row {
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a + &(k * b)).collect(),
            c: &self.c + &(k * &other.c),
            rel,
            prov: self.prov.union(&other.prov),
        }
    }

    /// Scales so the first nonzero coefficient has magnitude one.
    fn normalized(self) -> Row {
        match self.coef.iter().find(|a| !a.is_zero()) {
            Some(lead) if *lead != 1 && *lead != -1 => {
                let k = lead.abs().recip().expect("lead coefficient is nonzero");
                self.scale(&k)
            }
            _ => self,
        }
    }
}

/// `x_k = expr` recorded while removing an equality.
#[derive(Clone, Debug)]
struct Subst {
    var: usize,
    coef: Vec<Rational>,
    c: Rational,
    prov: Prov,
}

struct Lowered {
    vars: Vec<VarId>,
    rows: Vec<Row>,
    labels: Vec<String>,
}

fn lower(sys: &ConstraintSystem) -> Lowered {
    let vars = sys.variables().to_vec();
    let index: HashMap<VarId, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let rows = sys
        .constraints()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut coef = vec![Rational::zero(); vars.len()];
            for (v, a) in c.lhs.terms() {
                coef[index[v]] = a.clone();
            }
            Row { coef, c: c.lhs.constant_part().clone(), rel: c.rel, prov: Prov::single(i) }
        })
        .collect();
    let labels = sys.constraints().iter().map(|c| c.label.clone()).collect();
    Lowered { vars, rows, labels }
}

fn labels_of(prov: &Prov, labels: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in prov.indices() {
        if !out.contains(&labels[i]) {
            out.push(labels[i].clone());
        }
    }
    out
}

fn raise_row(row: &Row, vars: &[VarId]) -> LinExpr {
    LinExpr::from_parts(
        row.c.clone(),
        row.coef.iter().zip(vars).filter(|(a, _)| !a.is_zero()).map(|(a, v)| (*v, a.clone())),
    )
}

/// Removes equalities by solving each for its first unprotected variable.
/// An equality left only in the protected variable becomes two `<=` rows.
/// `Err` carries the provenance of a contradictory constant equality.
fn substitute_rows(rows: Vec<Row>, protect: Option<usize>) -> Result<(Vec<Row>, Vec<Subst>), Prov> {
    let (mut eqs, mut ineqs): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.rel == Relation::Eq);
    let mut subs: Vec<Subst> = Vec::new();
    while !eqs.is_empty() {
        let eq = eqs.remove(0);
        let pivot = eq.coef.iter().enumerate().position(|(i, a)| !a.is_zero() && Some(i) != protect);
        let Some(k) = pivot else {
            if eq.is_constant() {
                if !eq.constant_holds() {
                    return Err(eq.prov);
                }
                continue;
            }
            // Only the protected variable remains: keep it as a two-sided bound.
            let mut le = eq.clone();
            le.rel = Relation::Le;
            ineqs.push(le.clone());
            ineqs.push(le.scale(&Rational::int(-1)));
            continue;
        };
        // x_k = -(rest + c) / a_k
        let inv = eq.coef[k].recip().expect("pivot is nonzero");
        let m = -&inv;
        let mut coef: Vec<Rational> = eq.coef.iter().map(|a| a * &m).collect();
        coef[k] = Rational::zero();
        let sub = Subst { var: k, coef, c: &eq.c * &m, prov: eq.prov.clone() };
        let apply = |r: &mut Row| {
            let a = std::mem::take(&mut r.coef[k]);
            if a.is_zero() {
                return;
            }
            for (x, s) in r.coef.iter_mut().zip(&sub.coef) {
                *x += &(&a * s);
            }
            r.c += &(&a * &sub.c);
            r.prov = r.prov.union(&sub.prov);
        };
        eqs.iter_mut().for_each(apply);
        ineqs.iter_mut().for_each(apply);
        subs.push(sub);
    }
    Ok((ineqs, subs))
}

/// Drops satisfied constant rows; `Err` on the first false one.
fn check_constants(rows: Vec<Row>) -> Result<Vec<Row>, Prov> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        if r.is_constant() {
            if !r.constant_holds() {
                return Err(r.prov);
            }
        } else {
            out.push(r);
        }
    }
    Ok(out)
}

/// Keeps the tightest row per direction vector. Constant rows pass through.
fn dedupe(rows: Vec<Row>) -> Vec<Row> {
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.normalized();
        if r.is_constant() {
            out.push(r);
            continue;
        }
        match seen.get(&r.coef) {
            Some(&i) => {
                let kept = &out[i];
                // coef.x <= -c: larger c is tighter, ties go to strict.
                let tighter = r.c > kept.c || (r.c == kept.c && r.rel == Relation::Lt && kept.rel != Relation::Lt);
                if tighter {
                    out[i] = r;
                }
            }
            None => {
                seen.insert(r.coef.clone(), out.len());
                out.push(r);
            }
        }
    }
    out
}

/// One Fourier-Motzkin step on column `k`.
fn eliminate_column(rows: Vec<Row>, k: usize) -> Vec<Row> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut rest = Vec::new();
    for r in rows {
        if r.coef[k].is_negative() {
            lower.push(r);
        } else if r.coef[k].is_positive() {
            upper.push(r);
        } else {
            rest.push(r);
        }
    }
    for u in &upper {
        for l in &lower {
            // u.coef[k] > 0 > l.coef[k]: scale so the k-th terms cancel.
            let k_u = u.coef[k].clone();
            let k_l = l.coef[k].abs();
            let mut combo = u.scale(&k_l).add_scaled(&k_u, l);
            combo.coef[k] = Rational::zero();
            rest.push(combo);
        }
    }
    dedupe(rest)
}

/// Residual interval for column `k` given values for the others, as (lower, upper)
/// bounds with strictness.
/// A bound value and whether it is strict.
type Side = Option<(Rational, bool)>;

fn residual_bounds(rows: &[Row], k: usize, x: &[Option<Rational>]) -> (Side, Side) {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for r in rows {
        let a = &r.coef[k];
        if a.is_zero() {
            continue;
        }
        let mut rest = r.c.clone();
        for (j, (b, v)) in r.coef.iter().zip(x).enumerate() {
            if j != k && !b.is_zero() {
                rest += &(b * v.as_ref().expect("later variables assigned first"));
            }
        }
        // a*x_k + rest REL 0
        let bound = (-rest).checked_div(a).expect("nonzero coefficient");
        let strict = r.rel == Relation::Lt;
        if a.is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, hs)) => bound < *h || (bound == *h && strict && !hs),
            };
            if tighter {
                hi = Some((bound, strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, ls)) => bound > *l || (bound == *l && strict && !ls),
            };
            if tighter {
                lo = Some((bound, strict));
            }
        }
    }
    (lo, hi)
}

fn pick(lo: Option<(Rational, bool)>, hi: Option<(Rational, bool)>) -> Rational {
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => Rational::midpoint(&l, &h),
        (Some((l, _)), None) => l + Rational::one(),
        (None, Some((h, _))) => h - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

/// Decides feasibility, eliminating in `order` (indices into the declared variables).
fn decide(low: &Lowered, order: &[usize]) -> Result<Vec<Rational>, Prov> {
    let n = low.vars.len();
    let (rows, subs) = substitute_rows(low.rows.clone(), None)?;
    let mut rows = check_constants(dedupe(rows))?;
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::with_capacity(order.len());
    let substituted: Vec<usize> = subs.iter().map(|s| s.var).collect();
    for &k in order.iter().filter(|k| !substituted.contains(k)) {
        let next = check_constants(eliminate_column(rows.clone(), k))?;
        stages.push((k, std::mem::replace(&mut rows, next)));
    }
    let mut x: Vec<Option<Rational>> = vec![None; n];
    for (k, stage_rows) in stages.iter().rev() {
        let (lo, hi) = residual_bounds(stage_rows, *k, &x);
        x[*k] = Some(pick(lo, hi));
    }
    for s in subs.iter().rev() {
        let mut v = s.c.clone();
        for (a, xv) in s.coef.iter().zip(&x) {
            if !a.is_zero() {
                v += &(a * xv.as_ref().expect("substitution uses assigned variables"));
            }
        }
        x[s.var] = Some(v);
    }
    Ok(x.into_iter().map(|v| v.unwrap_or_default()).collect())
}

fn verdict_from(low: &Lowered, result: Result<Vec<Rational>, Prov>) -> Verdict {
    match result {
        Ok(values) => Verdict::feasible(low.vars.iter().copied().zip(values).collect()),
        Err(prov) => Verdict::infeasible(labels_of(&prov, &low.labels)),
    }
}

/// Decides feasibility with declaration-order elimination. A feasible verdict
/// carries the midpoint-rule witness; an infeasible one names an inconsistent
/// subset of labels.
pub fn is_feasible(sys: &ConstraintSystem) -> Verdict {
    let low = lower(sys);
    let order: Vec<usize> = (0..low.vars.len()).collect();
    let result = decide(&low, &order);
    verdict_from(&low, result)
}

/// As [`is_feasible`] but eliminating in the given order. Variables left out of
/// `order` are eliminated afterwards in declaration order.
pub fn is_feasible_with_order(sys: &ConstraintSystem, order: &[VarId]) -> Verdict {
    let low = lower(sys);
    let mut idx: Vec<usize> = order.iter().filter_map(|v| low.vars.iter().position(|w| w == v)).collect();
    for i in 0..low.vars.len() {
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    let result = decide(&low, &idx);
    verdict_from(&low, result)
}

/// The set of values of `v` for which the system is satisfiable.
pub fn project_interval(sys: &ConstraintSystem, v: VarId) -> IntervalSet {
    let low = lower(sys);
    let Some(keep) = low.vars.iter().position(|w| *w == v) else {
        return if is_feasible(sys).feasible { IntervalSet::full() } else { IntervalSet::empty() };
    };
    let Ok((rows, _)) = substitute_rows(low.rows, Some(keep)) else {
        return IntervalSet::empty();
    };
    let Ok(mut rows) = check_constants(dedupe(rows)) else {
        return IntervalSet::empty();
    };
    for k in (0..low.vars.len()).filter(|k| *k != keep) {
        match check_constants(eliminate_column(rows, k)) {
            Ok(next) => rows = next,
            Err(_) => return IntervalSet::empty(),
        }
    }
    let mut lo = Bound::neg_inf();
    let mut hi = Bound::pos_inf();
    for r in &rows {
        let a = &r.coef[keep];
        let b = (-&r.c).checked_div(a).expect("non-constant rows have a nonzero coefficient");
        let bound = if r.rel == Relation::Lt { Bound::open(b) } else { Bound::closed(b) };
        if a.is_positive() {
            hi = hi.tighter_upper(&bound);
        } else {
            lo = lo.tighter_lower(&bound);
        }
    }
    IntervalSet::from_bounds(lo, hi)
}

/// Result of removing all equalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// Equivalent inequality system, with each removed variable's defining
    /// expression in the order the substitutions were made.
    Reduced { system: ConstraintSystem, map: Vec<(VarId, LinExpr)> },
    /// The equalities alone are contradictory.
    Contradiction { certificate: Vec<String> },
}

pub fn substitute_equalities(sys: &ConstraintSystem) -> Substitution {
    let low = lower(sys);
    match substitute_rows(low.rows.clone(), None) {
        Err(prov) => Substitution::Contradiction { certificate: labels_of(&prov, &low.labels) },
        Ok((rows, subs)) => {
            let system = raise(&low, rows);
            let map = subs
                .iter()
                .map(|s| {
                    let expr = Row { coef: s.coef.clone(), c: s.c.clone(), rel: Relation::Eq, prov: Prov::default() };
                    (low.vars[s.var], raise_row(&expr, &low.vars))
                })
                .collect();
            Substitution::Reduced { system, map }
        }
    }
}

fn raise(low: &Lowered, rows: Vec<Row>) -> ConstraintSystem {
    let constraints = rows
        .iter()
        .map(|r| Constraint::new(raise_row(r, &low.vars), r.rel, labels_of(&r.prov, &low.labels).join(" + ")))
        .collect();
    ConstraintSystem::from_parts(low.vars.clone(), constraints).expect("rows only use declared variables")
}

/// One elimination step. The result no longer declares `v`; derived
/// constraints are labelled by joining their parents' labels. Constant rows,
/// including false ones, are kept.
pub fn fm_eliminate(sys: &ConstraintSystem, v: VarId) -> Result<ConstraintSystem, ConstraintError> {
    if let Some(c) = sys.constraints().iter().find(|c| c.rel == Relation::Eq) {
        return Err(ConstraintError::EqualityPresent(c.label.clone()));
    }
    let low = lower(sys);
    let k = low
        .vars
        .iter()
        .position(|w| *w == v)
        .ok_or_else(|| ConstraintError::Undeclared { var: v, label: "elimination target".into() })?;
    let rows = eliminate_column(low.rows.clone(), k);
    let full = raise(&low, rows);
    let vars: Vec<VarId> = low.vars.iter().copied().filter(|w| *w != v).collect();
    ConstraintSystem::from_parts(vars, full.constraints().to_vec())
}

/// Expression-level evaluation shared by callers that hold an assignment.
pub fn satisfies(sys: &ConstraintSystem, w: &ExponentAssignment) -> bool {
    matches!(sys.check_assignment(w), Ok(v) if v.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::VarId::{Eps as Y, Sigma as X};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sys(vars: &[VarId], cs: Vec<Constraint>) -> ConstraintSystem {
        ConstraintSystem::from_parts(vars.to_vec(), cs).unwrap()
    }

    #[test]
    fn substitution_pins_and_solves() {
        let s = sys(
            &[X, Y],
            vec![Constraint::eq(X, q("1/2"), "pin"), Constraint::lt(LinExpr::var(X) + LinExpr::var(Y), q("1"), "sum")],
        );
        let Substitution::Reduced { system, map } = substitute_equalities(&s) else { panic!() };
        assert_eq!(map, vec![(X, LinExpr::constant(q("1/2")))]);
        assert_eq!(system.constraints().len(), 1);
        let c = &system.constraints()[0];
        assert_eq!(c.lhs, LinExpr::from_parts(q("-1/2"), [(Y, q("1"))]));
        assert_eq!(c.rel, Relation::Lt);
    }

    #[test]
    fn substitution_detects_contradictory_pins() {
        let s = sys(&[X], vec![Constraint::eq(X, q("1/2"), "a"), Constraint::eq(X, q("1/3"), "b")]);
        let Substitution::Contradiction { certificate } = substitute_equalities(&s) else { panic!() };
        assert_eq!(certificate, vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn substitution_linear_solve() {
        let s = sys(
            &[X, Y],
            vec![
                Constraint::eq(LinExpr::var(X) + LinExpr::var(Y), Rational::zero(), "e"),
                Constraint::le(LinExpr::var(X) - LinExpr::var(Y), Rational::zero(), "i"),
            ],
        );
        let Substitution::Reduced { system, map } = substitute_equalities(&s) else { panic!() };
        assert_eq!(map, vec![(X, LinExpr::term(Y, q("-1")))]);
        assert_eq!(system.constraints()[0].lhs, LinExpr::term(Y, q("-2")));
    }

    #[test]
    fn eliminate_single_pair() {
        let s = sys(&[X, Y], vec![Constraint::lt(X, Y, "x<y"), Constraint::lt(Y, q("1"), "y<1")]);
        let out = fm_eliminate(&s, Y).unwrap();
        assert_eq!(out.variables(), &[X]);
        assert_eq!(out.constraints().len(), 1);
        let c = &out.constraints()[0];
        assert_eq!(c.lhs, LinExpr::from_parts(q("-1"), [(X, q("1"))]));
        assert_eq!(c.rel, Relation::Lt);
        assert_eq!(c.label, "x<y + y<1");
    }

    #[test]
    fn eliminate_propagates_strictness() {
        let s = sys(
            &[Y],
            vec![
                Constraint::le(Rational::zero(), Y, "0<=y"),
                Constraint::le(Y, Rational::zero(), "y<=0"),
                Constraint::lt(Y, Rational::zero(), "y<0"),
            ],
        );
        let out = fm_eliminate(&s, Y).unwrap();
        let rels: Vec<_> = out.constraints().iter().map(|c| (c.lhs.is_constant(), c.rel)).collect();
        assert!(rels.contains(&(true, Relation::Le)));
        assert!(rels.contains(&(true, Relation::Lt)));
        assert!(out.constraints().iter().any(|c| !c.rel.holds(c.lhs.constant_part())));
    }

    #[test]
    fn eliminate_rejects_equalities() {
        let s = sys(&[X], vec![Constraint::eq(X, q("1"), "pin")]);
        assert!(fm_eliminate(&s, X).is_err());
    }

    #[test]
    fn midpoint_witness() {
        let s = sys(&[X], vec![Constraint::lt(Rational::zero(), X, "0<x"), Constraint::lt(X, q("1"), "x<1")]);
        let v = is_feasible(&s);
        assert!(v.feasible);
        assert_eq!(v.witness.unwrap().get(X), Some(&q("1/2")));
    }

    #[test]
    fn half_bounded_and_free_witnesses() {
        let s = sys(&[X, Y], vec![Constraint::lt(q("3"), X, "x>3")]);
        let w = is_feasible(&s).witness.unwrap();
        assert_eq!(w.get(X), Some(&q("4")));
        assert_eq!(w.get(Y), Some(&q("0")));
        let s = sys(&[X], vec![Constraint::le(X, q("-2"), "x<=-2")]);
        assert_eq!(is_feasible(&s).witness.unwrap().get(X), Some(&q("-3")));
    }

    #[test]
    fn degenerate_closed_interval_witness() {
        let s = sys(&[X], vec![Constraint::le(q("2/3"), X, "lo"), Constraint::le(X, q("2/3"), "hi")]);
        assert_eq!(is_feasible(&s).witness.unwrap().get(X), Some(&q("2/3")));
    }

    #[test]
    fn empty_interval_certificate() {
        let s = sys(&[X], vec![Constraint::lt(X, Rational::zero(), "x<0"), Constraint::le(Rational::zero(), X, "0<=x")]);
        let v = is_feasible(&s);
        assert!(!v.feasible);
        let mut cert = v.certificate.unwrap();
        cert.sort();
        assert_eq!(cert, vec!["0<=x".to_string(), "x<0".to_string()]);
    }

    #[test]
    fn projection_through_equality() {
        let s = sys(
            &[X, Y],
            vec![
                Constraint::lt(Rational::zero(), X, "0<x"),
                Constraint::lt(X, q("1"), "x<1"),
                Constraint::eq(Y, X, "y=x"),
            ],
        );
        let p = project_interval(&s, X);
        assert_eq!(p.to_string(), "(0, 1)");
        let p = project_interval(&s, Y);
        assert_eq!(p.to_string(), "(0, 1)");
    }

    #[test]
    fn projection_of_pinned_variable_is_a_point() {
        let s = sys(&[X, Y], vec![Constraint::eq(X, q("1/3"), "pin"), Constraint::lt(Y, X, "y<x")]);
        assert_eq!(project_interval(&s, X), IntervalSet::point(q("1/3")));
    }

    #[test]
    fn projection_of_infeasible_is_empty() {
        let s = sys(&[X, Y], vec![Constraint::lt(Y, Rational::zero(), "a"), Constraint::lt(Rational::zero(), Y, "b")]);
        assert!(project_interval(&s, X).is_empty());
        assert!(project_interval(&s, Y).is_empty());
    }

    #[test]
    fn witness_checks_against_original_system() {
        let s = sys(
            &[X, Y],
            vec![
                Constraint::eq(LinExpr::var(X) + LinExpr::var(Y), q("1"), "sum"),
                Constraint::lt(X, Y, "x<y"),
                Constraint::le(Rational::zero(), X, "x>=0"),
            ],
        );
        let v = is_feasible(&s);
        assert!(satisfies(&s, v.witness.as_ref().unwrap()));
    }
}
