//! Rasterized `(s, alpha)` regions: exact lattice scans, region comparison,
//! and boundary tracing by bisection.

mod compare;
mod grid;
mod target;
mod trace;

pub use compare::{compare, CompareMode, Mismatch, MismatchReport};
pub use grid::{default_alpha_max, scan, scan_with_threads, thread_cap, GridSpec, RegionGrid, THREADS_ENV};
pub use target::{Condition, Region, Status, Target};
pub use trace::{boundary_trace, trace_alpha, trace_critical, trace_s, Bracket};

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unknown target {0:?}")]
    UnknownTarget(String),
    #[error("target {0} is not part of the grid")]
    MissingTarget(String),
    #[error("step {step} does not divide the {axis} range width {width}")]
    StepDoesNotDivide { axis: &'static str, step: Rational, width: Rational },
}
