//! Command-line front end: JSON documents, figures, verification suites and
//! the argument parser.

// Errors carry exact rationals for their diagnostics and sit on cold paths.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod doc;
pub mod figure;
pub mod verify;
