mod common;

use common::{rational, system, with_pin, VARS};
use proptest::prelude::*;
use uniq_core::constraints::{is_feasible, is_feasible_with_order, project_interval, substitute_equalities, Substitution};
use uniq_core::oracle;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn verdict_matches_oracle(sys in system()) {
        let v = is_feasible(&sys);
        let o = oracle::decide(&sys);
        prop_assert_eq!(v.feasible, o.feasible, "system:\n{}", sys);
        if let Some(w) = &o.grid_witness {
            prop_assert!(sys.check_assignment(w).unwrap().is_empty());
        }
    }

    #[test]
    fn witness_satisfies_every_constraint(sys in system()) {
        let v = is_feasible(&sys);
        if v.feasible {
            let w = v.witness.unwrap();
            prop_assert_eq!(w.len(), sys.variables().len());
            prop_assert!(sys.check_assignment(&w).unwrap().is_empty(), "system:\n{}witness {:?}", sys, w);
        }
    }

    #[test]
    fn certificate_subset_is_infeasible(sys in system()) {
        let v = is_feasible(&sys);
        if !v.feasible {
            let cert = v.certificate.unwrap();
            prop_assert!(!cert.is_empty());
            let sub = uniq_core::ConstraintSystem::from_parts(
                sys.variables().to_vec(),
                sys.constraints().iter().filter(|c| cert.contains(&c.label)).cloned().collect(),
            ).unwrap();
            prop_assert!(!oracle::decide(&sub).feasible);
        }
    }

    #[test]
    fn verdict_independent_of_order(sys in system(), perm in Just(VARS).prop_shuffle()) {
        let base = is_feasible(&sys).feasible;
        prop_assert_eq!(is_feasible_with_order(&sys, &perm).feasible, base);
    }

    #[test]
    fn projection_agrees_with_pinning(sys in system(), k in 0usize..4, xs in prop::collection::vec(rational(5, 6), 4)) {
        let v = sys.variables()[k % sys.variables().len()];
        let proj = project_interval(&sys, v);
        let mut points = xs;
        for iv in proj.intervals() {
            for b in [iv.lo(), iv.hi()] {
                if let Some(x) = b.value().finite() {
                    points.push(x.clone());
                }
            }
        }
        for x in &points {
            let pinned = is_feasible(&with_pin(&sys, v, x)).feasible;
            prop_assert_eq!(proj.contains(x), pinned, "var {} at {} proj {}\n{}", v, x, proj, sys);
        }
        prop_assert_eq!(proj.is_empty(), !is_feasible(&sys).feasible);
    }

    #[test]
    fn substitution_preserves_feasibility(sys in system()) {
        let direct = oracle::decide(&sys).feasible;
        match substitute_equalities(&sys) {
            Substitution::Contradiction { .. } => prop_assert!(!direct),
            Substitution::Reduced { system, .. } => {
                prop_assert!(system.constraints().iter().all(|c| c.rel != uniq_core::Relation::Eq));
                prop_assert_eq!(oracle::decide(&system).feasible, direct);
            }
        }
    }
}
