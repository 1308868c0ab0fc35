//! Exact rationals, extended rationals, and canonical interval sets.

mod interval;
mod rational;

pub use interval::{Bound, Closedness, ExtRational, Interval, IntervalSet};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}: expected p/q, an integer, or a finite decimal")]
    Parse(String),
}
