use proptest::prelude::*;
use uniq_core::arith::Rational;
use uniq_core::constraints::{ExponentAssignment, VarId};
use uniq_core::scenarios::{
    build_scenario, critical_parametric, is_applicable, labels, predicate, sigma_window, PredicateId, ProblemParams, ScenarioId,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn gap(n: u32, s: &Rational) -> Rational {
    Rational::int(n as i64) - Rational::int(2) * s
}

fn energy(n: u32, s: &Rational) -> Rational {
    Rational::int(4).checked_div(&gap(n, s)).unwrap()
}

fn distributional(n: u32, s: &Rational) -> Rational {
    (Rational::int(n as i64) + Rational::int(2) * s).checked_div(&gap(n, s)).unwrap()
}

/// Parameters on a lattice, with the power sometimes placed on a critical
/// curve so that every guard is exercised.
fn params() -> impl Strategy<Value = ProblemParams> {
    (2u32..=7, 0i64..48, 0u8..4, 1i64..=72).prop_filter_map("s below n/2", |(n, k, curve, a)| {
        let s = q(k, 24);
        if s >= q(n as i64, 2) {
            return None;
        }
        let alpha = match curve {
            0 => energy(n, &s),
            1 => distributional(n, &s),
            _ => q(a, 12),
        };
        ProblemParams::new(n, s, alpha).ok()
    })
}

/// The applicability conditions, written out independently of the builders.
fn expected_guard(id: ScenarioId, p: &ProblemParams) -> bool {
    let (n, s, alpha) = (p.n(), p.s(), p.alpha());
    let unit = s.is_positive() && *s < 1;
    unit && match id {
        ScenarioId::SubcriticalUsual | ScenarioId::SubcriticalBetter => n >= 3 && *alpha >= 1,
        ScenarioId::HolderUsual | ScenarioId::HolderBetter => n >= 3 && *alpha < 1,
        ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High => n == 2 && *alpha == distributional(n, s),
        ScenarioId::CriticalN3Mass => n == 3 && *alpha == distributional(n, s),
        ScenarioId::CriticalN3Energy => n == 3 && *alpha == energy(n, s),
        ScenarioId::CriticalHighDim => n >= 4 && *alpha == energy(n, s),
    }
}

fn holds(id: PredicateId, p: &ProblemParams) -> bool {
    predicate(id, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn guards_are_sound(p in params()) {
        for id in ScenarioId::ALL {
            let expected = expected_guard(id, &p);
            prop_assert_eq!(is_applicable(id, &p), expected, "{} at {:?}", id, p);
            prop_assert_eq!(build_scenario(id, &p).is_ok(), expected, "{} at {:?}", id, p);
        }
    }

    #[test]
    fn every_constraint_is_labelled(p in params()) {
        for id in ScenarioId::ALL {
            if let Ok(sys) = build_scenario(id, &p) {
                for branch in sys.branches() {
                    for c in branch.constraints() {
                        prop_assert!(labels::is_catalogued(&c.label), "{}: {:?}", id, c.label);
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_satisfy_their_systems(p in params()) {
        for id in ScenarioId::ALL {
            if let Ok(sys) = build_scenario(id, &p) {
                let v = sys.is_feasible();
                if let Some(w) = v.witness {
                    prop_assert!(sys.check_assignment(&w).unwrap().is_empty(), "{} at {:?}", id, p);
                } else {
                    prop_assert!(!v.certificate.unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn earlier_results_are_covered(n in 3u32..=5, k in 1i64..24, a in 1i64..=96) {
        let s = q(k, 24);
        let alpha = q(a, 24);
        let p = ProblemParams::new(n, s.clone(), alpha.clone()).unwrap();
        let covered = holds(PredicateId::Thm11, &p) || holds(PredicateId::Thm12, &p);
        if holds(PredicateId::Rogers, &p) || holds(PredicateId::FurioliTerraneo, &p) {
            prop_assert!(covered, "{:?}", p);
        }
        if holds(PredicateId::WinTsutsumiSub, &p) && alpha < energy(n, &s) {
            prop_assert!(covered, "{:?}", p);
        }
        let floor = (Rational::int(2) * &s).checked_div(&gap(n, &s)).unwrap();
        if holds(PredicateId::Kato, &p) && alpha > floor {
            prop_assert!(covered, "{:?}", p);
        }
    }

    #[test]
    fn open_cases_avoid_the_theorems(n in 3u32..=7, k in 0i64..24, a in 1i64..=96) {
        let p = ProblemParams::new(n, q(k, 24), q(a, 24)).unwrap();
        if holds(PredicateId::OpenSub, &p) {
            prop_assert!(!holds(PredicateId::Thm11, &p) && !holds(PredicateId::Thm12, &p), "{:?}", p);
        }
    }

    #[test]
    fn lipschitz_window_matches_closed_form(n in 3u32..=5, k in 1i64..8, j in 0i64..8) {
        let s = q(k, 8);
        let lo = Rational::max_of(&Rational::one(), &(Rational::int(2) * &s).checked_div(&gap(n, &s)).unwrap()).clone();
        let tops = [energy(n, &s), distributional(n, &s), (Rational::int(4) * &s + Rational::int(4) - q(n as i64, n as i64 - 1)).checked_div(&gap(n, &s)).unwrap()];
        let hi = tops.iter().min().unwrap().clone();
        prop_assume!(lo < hi);
        let alpha = &lo + &((&hi - &lo) * q(j, 8));
        let w = sigma_window(ScenarioId::SubcriticalUsual, &ProblemParams::new(n, s, alpha).unwrap()).unwrap();
        prop_assert!(w.same_endpoints, "engine {} closed form {}", w.engine, w.closed_form);
    }
}

/// Explicit critical assignments with the free parameter placed at the middle
/// of its window; the derived exponents `1/p2` and `1/l` follow from their
/// defining identities.
fn explicit(id: ScenarioId, s: &Rational) -> ExponentAssignment {
    let half = q(1, 2);
    let mut w = ExponentAssignment::new();
    let n: i64 = if matches!(id, ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High) { 2 } else { 3 };
    let sigma = match id {
        ScenarioId::CriticalN2Low => {
            let eps = s * &half;
            w.insert(VarId::Eps, eps.clone());
            w.insert(VarId::LambdaInv, &half + &(&eps * &half));
            w.insert(VarId::AInv, s * &half);
            w.insert(VarId::BInv, &half - s);
            w.insert(VarId::QInv, half.clone());
            w.insert(VarId::RInv, s * &half);
            w.insert(VarId::P1Inv, &half + s - &eps * &half);
            w.insert(VarId::P3Inv, (Rational::one() + s) * &half);
            &eps - s
        }
        ScenarioId::CriticalN2High => {
            let eps = (Rational::one() - s) * q(1, 4);
            w.insert(VarId::Eps, eps.clone());
            w.insert(VarId::AInv, &half - &eps * &half);
            w.insert(VarId::BInv, &eps * &half);
            w.insert(VarId::LambdaInv, s * &half + &eps);
            w.insert(VarId::QInv, s * &half + &eps * &half);
            w.insert(VarId::RInv, &half - &eps * &half - s * &half);
            w.insert(VarId::P1Inv, Rational::one() - &eps);
            w.insert(VarId::P3Inv, &half + s * &half);
            s - &Rational::one() + Rational::int(2) * &eps
        }
        ScenarioId::CriticalN3Mass => {
            let top = Rational::min_of(s, &(&half - q(2, 3) * s)).clone();
            let b = Rational::midpoint(&(q(1, 3) - q(1, 3) * s), &top);
            w.insert(VarId::AInv, &half - &b);
            w.insert(VarId::LambdaInv, Rational::one() - s * &half - &b * &half);
            w.insert(VarId::QInv, q(1, 4) + s * &half + b.clone());
            w.insert(VarId::RInv, &half - &b - q(1, 3) * s);
            w.insert(VarId::P1Inv, &half + q(2, 3) * s);
            w.insert(VarId::P3Inv, &half + q(1, 3) * s);
            w.insert(VarId::BInv, b);
            -s.clone()
        }
        ScenarioId::CriticalN3Energy => {
            w.insert(VarId::GammaInv, half.clone());
            w.insert(VarId::RhoInv, q(1, 6));
            w.insert(VarId::AInv, q(1, 4));
            w.insert(VarId::BInv, q(1, 3));
            w.insert(VarId::QInv, half.clone());
            w.insert(VarId::RInv, q(1, 6));
            w.insert(VarId::P1Inv, Rational::one() - q(1, 3) * s);
            w.insert(VarId::P3Inv, q(2, 3));
            s - &Rational::one()
        }
        _ => unreachable!("explicit assignments exist only for the fixed-choice scenarios"),
    };
    let r = w.get(VarId::RInv).unwrap().clone();
    w.insert(VarId::P2Inv, &r + &(&sigma * &q(1, n)));
    w.insert(VarId::LInv, &half - &(s * &q(1, n)) - &(&sigma * &q(1, n)));
    w.insert(VarId::Sigma, sigma);
    w
}

fn samples(lo: Rational, hi: Rational, include_lo: bool) -> Vec<Rational> {
    let width = &hi - &lo;
    if include_lo {
        (0..10).map(|k| &lo + &(&width * &q(k, 10))).collect()
    } else {
        (1..=10).map(|k| &lo + &(&width * &q(k, 11))).collect()
    }
}

#[test]
fn explicit_critical_assignments_pass_every_check() {
    let cases = [
        (ScenarioId::CriticalN2Low, 2, samples(q(0, 1), q(1, 2), false)),
        (ScenarioId::CriticalN2High, 2, samples(q(1, 2), q(1, 1), true)),
        (ScenarioId::CriticalN3Mass, 3, samples(q(1, 4), q(1, 2), false)),
        (ScenarioId::CriticalN3Energy, 3, samples(q(1, 2), q(1, 1), false)),
    ];
    for (id, n, ss) in cases {
        assert_eq!(ss.len(), 10);
        for s in ss {
            let alpha = id.critical_curve().unwrap().alpha(n, &s);
            let sys = build_scenario(id, &ProblemParams::new(n, s.clone(), alpha).unwrap()).unwrap();
            let w = explicit(id, &s);
            let bad = sys.check_assignment(&w).unwrap();
            assert!(bad.is_empty(), "{id} at s = {s}: {bad:?}");
            let v = sys.is_feasible();
            assert!(v.feasible && sys.check_assignment(&v.witness.unwrap()).unwrap().is_empty());
        }
    }
}

#[test]
fn parametric_systems_are_labelled() {
    for (id, n) in [
        (ScenarioId::CriticalN2Low, 2),
        (ScenarioId::CriticalN2High, 2),
        (ScenarioId::CriticalN3Mass, 3),
        (ScenarioId::CriticalN3Energy, 3),
        (ScenarioId::CriticalHighDim, 4),
    ] {
        let sys = critical_parametric(id, n).unwrap();
        assert!(sys.branches().iter().flat_map(|b| b.constraints()).all(|c| labels::is_catalogued(&c.label)), "{id}");
    }
}
