#![allow(dead_code)]

use proptest::prelude::*;
use uniq_core::arith::{Bound, Interval, IntervalSet, Rational};
use uniq_core::constraints::{Constraint, ConstraintSystem, LinExpr, Relation, VarId};

pub fn rational(range: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-range * max_den..=range * max_den, 1..=max_den).prop_map(|(n, d)| Rational::frac(n, d))
}

pub fn bound() -> impl Strategy<Value = (Rational, bool)> {
    (rational(3, 4), any::<bool>())
}

fn make_bound((v, closed): (Rational, bool)) -> Bound {
    if closed {
        Bound::closed(v)
    } else {
        Bound::open(v)
    }
}

/// Up to four finite or half-infinite intervals, canonicalized.
pub fn interval_set() -> impl Strategy<Value = IntervalSet> {
    let one = (prop::option::of(bound()), prop::option::of(bound())).prop_map(|(lo, hi)| {
        let lo = lo.map(make_bound).unwrap_or_else(Bound::neg_inf);
        let hi = hi.map(make_bound).unwrap_or_else(Bound::pos_inf);
        Interval::new(lo, hi)
    });
    prop::collection::vec(one, 0..4).prop_map(|ivs| IntervalSet::canonicalize(ivs.into_iter().flatten().collect()))
}

pub const VARS: [VarId; 4] = [VarId::Sigma, VarId::GammaInv, VarId::RhoInv, VarId::QInv];

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![4 => Just(Relation::Lt), 4 => Just(Relation::Le), 1 => Just(Relation::Eq)]
}

/// Random systems with at most four variables, at most ten constraints, and
/// integer coefficients and constants in [-4, 4].
pub fn system() -> impl Strategy<Value = ConstraintSystem> {
    (1usize..=4).prop_flat_map(|d| {
        let row = (prop::collection::vec(-4i64..=4, d), -4i64..=4, relation());
        prop::collection::vec(row, 1..=10).prop_map(move |rows| {
            let vars = VARS[..d].to_vec();
            let cons = rows
                .into_iter()
                .enumerate()
                .map(|(i, (coef, c, rel))| {
                    let lhs = LinExpr::from_parts(
                        Rational::int(c),
                        vars.iter().zip(coef).map(|(v, a)| (*v, Rational::int(a))),
                    );
                    Constraint::new(lhs, rel, format!("c{i}"))
                })
                .collect();
            ConstraintSystem::from_parts(vars, cons).unwrap()
        })
    })
}

pub fn with_pin(sys: &ConstraintSystem, v: VarId, x: &Rational) -> ConstraintSystem {
    let mut out = sys.clone();
    out.add(Constraint::eq(v, x.clone(), "pin")).unwrap();
    out
}
