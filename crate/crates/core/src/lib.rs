//! Exact feasibility engine for the exponent algebra behind unconditional
//! uniqueness results for the nonlinear Schrödinger equation.
//!
//! Everything is computed with exact rationals. Exponent systems are decided by
//! Fourier-Motzkin elimination, which also yields witnesses and labelled
//! infeasibility certificates.

// Errors carry exact rationals for their diagnostics and sit on cold paths.
#![allow(clippy::result_large_err)]

pub mod arith;
pub mod constraints;
pub mod oracle;
pub mod regions;
pub mod scenarios;
pub mod strichartz;

pub use arith::{Bound, Closedness, ExtRational, Interval, IntervalSet, Rational};
pub use constraints::{Constraint, ConstraintSystem, DisjunctiveSystem, ExponentAssignment, LinExpr, Relation, VarId, Verdict};
