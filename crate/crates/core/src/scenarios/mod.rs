//! Proof scenarios as constraint systems, closed-form theorem and literature
//! regions, the critical threshold `s0`, and the inequality-chain audit.

mod build;
mod chains;
mod ids;
pub mod labels;
mod params;
mod predicates;
mod s0;
mod windows;

pub use build::{build_scenario, build_unguarded, critical_parametric, is_applicable, CriticalCurve};
pub use chains::{verify_chain, ChainEntry, ChainId, ChainReport};
pub use ids::{PredicateId, ScenarioId};
pub use params::{ProblemParams, ScenarioError};
pub use predicates::{literature_predicate, predicate, theorem_predicate, theorem_predicate_with_tol, default_s0_tol, DEFAULT_S0_TOL};
pub use s0::{quadratic, s0, S0Enclosure};
pub use windows::{closed_form_window, sigma_window, SigmaWindow};
