//! Affine constraint systems over exponent variables and their exact solver.

mod dnf;
mod fm;
mod types;

pub use dnf::DisjunctiveSystem;
pub use fm::{fm_eliminate, is_feasible, is_feasible_with_order, project_interval, satisfies, substitute_equalities, Substitution};
pub use types::{Constraint, ConstraintError, ConstraintSystem, ExponentAssignment, LinExpr, Relation, VarId, Verdict, Violation};
