//! Brute-force feasibility decision that shares no code with the eliminator.
//!
//! A system `a_i.x + c_i REL_i 0` is infeasible exactly when some nonnegative
//! combination `y` of its rows cancels every variable and leaves a false
//! constant: `sum y_i c_i > 0`, or `sum y_i c_i >= 0` with a strict row in the
//! support of `y` (Motzkin's transposition theorem). Such a `y` can always be
//! taken as an extreme ray of the cone `{y >= 0 : sum y_i a_i = 0}`, and extreme
//! rays have support of size at most `d + 1`. Enumerating those supports
//! decides feasibility completely. A small rational grid search supplies
//! witnesses independently where it can.

use crate::arith::Rational;
use crate::constraints::{ConstraintSystem, ExponentAssignment, Relation};

struct Row {
    a: Vec<Rational>,
    c: Rational,
    strict: bool,
    source: usize,
}

fn rows_of(sys: &ConstraintSystem) -> Vec<Row> {
    let vars = sys.variables();
    let mut rows = Vec::new();
    for (i, con) in sys.constraints().iter().enumerate() {
        let a: Vec<Rational> = vars.iter().map(|v| con.lhs.coeff(*v)).collect();
        let c = con.lhs.constant_part().clone();
        match con.rel {
            Relation::Eq => {
                rows.push(Row { a: a.iter().map(|x| -x).collect(), c: -&c, strict: false, source: i });
                rows.push(Row { a, c, strict: false, source: i });
            }
            rel => rows.push(Row { a, c, strict: rel == Relation::Lt, source: i }),
        }
    }
    rows
}

/// Generator of the null space of `sum y_i a_i = 0` over the chosen rows, when
/// that space is one-dimensional and spanned by a strictly positive vector.
fn positive_ray(rows: &[&Row], dim: usize) -> Option<Vec<Rational>> {
    let k = rows.len();
    // dim x k matrix whose columns are the row vectors.
    let mut m: Vec<Vec<Rational>> = (0..dim).map(|j| rows.iter().map(|r| r.a[j].clone()).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..dim).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].recip().ok()?;
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == dim {
            break;
        }
    }
    if k - rank != 1 {
        return None;
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut y = vec![Rational::zero(); k];
    y[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        y[pc] = -&m[r][free];
    }
    if y.iter().all(Rational::is_positive) {
        Some(y)
    } else if y.iter().all(Rational::is_negative) {
        Some(y.iter().map(|v| -v).collect())
    } else {
        None
    }
}

fn for_each_subset(n: usize, max: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if !cur.is_empty() && f(cur) {
            return true;
        }
        if cur.len() == max {
            return false;
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, max, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, max, &mut Vec::new(), f);
}

/// Indices of original constraints forming an infeasible combination, if any.
pub fn farkas_certificate(sys: &ConstraintSystem) -> Option<Vec<usize>> {
    let rows = rows_of(sys);
    let dim = sys.variables().len();
    let mut found: Option<Vec<usize>> = None;
    for_each_subset(rows.len(), dim + 1, &mut |subset| {
        let chosen: Vec<&Row> = subset.iter().map(|&i| &rows[i]).collect();
        let Some(y) = positive_ray(&chosen, dim) else { return false };
        let total: Rational = y.iter().zip(&chosen).map(|(w, r)| w * &r.c).sum();
        let strict = chosen.iter().any(|r| r.strict);
        if total.is_positive() || (total.is_zero() && strict) {
            let mut idx: Vec<usize> = chosen.iter().map(|r| r.source).collect();
            idx.dedup();
            found = Some(idx);
            true
        } else {
            false
        }
    });
    found
}

/// Searches rational grids of increasing fineness within `[-radius, radius]^d`,
/// visiting at most `budget` points.
pub fn grid_witness(sys: &ConstraintSystem, radius: i64, budget: usize) -> Option<ExponentAssignment> {
    let vars = sys.variables();
    let d = vars.len();
    let mut visited = 0usize;
    for den in 1i64.. {
        let side = (2 * radius * den + 1) as usize;
        let cells = side.checked_pow(d as u32)?;
        if visited + cells > budget {
            return None;
        }
        visited += cells;
        let mut idx = vec![0usize; d];
        loop {
            let w: ExponentAssignment = vars
                .iter()
                .zip(&idx)
                .map(|(v, &i)| (*v, Rational::frac(i as i64 - radius * den, den)))
                .collect();
            if sys.constraints().iter().all(|c| c.holds_at(&w).unwrap_or(false)) {
                return Some(w);
            }
            let mut j = 0;
            while j < d {
                idx[j] += 1;
                if idx[j] < side {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == d {
                break;
            }
        }
    }
    None
}

/// Verdict of the brute-force procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub feasible: bool,
    /// Labels of an infeasible combination when infeasible.
    pub certificate: Option<Vec<String>>,
    /// A grid point satisfying the system, when the search found one.
    pub grid_witness: Option<ExponentAssignment>,
}

pub fn decide(sys: &ConstraintSystem) -> OracleVerdict {
    match farkas_certificate(sys) {
        Some(idx) => OracleVerdict {
            feasible: false,
            certificate: Some(idx.iter().map(|&i| sys.constraints()[i].label.clone()).collect()),
            grid_witness: None,
        },
        None => OracleVerdict { feasible: true, certificate: None, grid_witness: grid_witness(sys, 4, 20_000) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{Constraint, LinExpr, VarId};

    fn sys(cs: Vec<Constraint>) -> ConstraintSystem {
        ConstraintSystem::from_parts(vec![VarId::Sigma, VarId::Eps], cs).unwrap()
    }

    #[test]
    fn strict_contradiction_found() {
        let s = sys(vec![
            Constraint::lt(VarId::Sigma, Rational::zero(), "a"),
            Constraint::le(Rational::zero(), VarId::Sigma, "b"),
        ]);
        let v = decide(&s);
        assert!(!v.feasible);
        assert_eq!(v.certificate.unwrap(), vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn touching_closed_bounds_are_feasible() {
        let s = sys(vec![
            Constraint::le(VarId::Sigma, Rational::zero(), "a"),
            Constraint::le(Rational::zero(), VarId::Sigma, "b"),
        ]);
        let v = decide(&s);
        assert!(v.feasible);
        assert!(v.grid_witness.is_some());
    }

    #[test]
    fn three_row_cycle() {
        let x = || LinExpr::var(VarId::Sigma);
        let y = || LinExpr::var(VarId::Eps);
        let s = sys(vec![
            Constraint::lt(x(), y(), "x<y"),
            Constraint::ge(x(), y() + LinExpr::constant(Rational::int(1)), "x>=y+1"),
        ]);
        assert!(!decide(&s).feasible);
    }

    #[test]
    fn equality_against_inequality() {
        let s = sys(vec![
            Constraint::eq(LinExpr::var(VarId::Sigma) + LinExpr::var(VarId::Eps), Rational::int(1), "sum"),
            Constraint::lt(VarId::Sigma, Rational::zero(), "x<0"),
            Constraint::lt(VarId::Eps, Rational::zero(), "y<0"),
        ]);
        assert!(!decide(&s).feasible);
    }

    #[test]
    fn constant_false_row() {
        let s = sys(vec![Constraint::lt(Rational::one(), Rational::zero(), "1<0")]);
        assert!(!decide(&s).feasible);
    }
}
