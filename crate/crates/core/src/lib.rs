//! Poisson structures on gl(n,R) attached to the QU factorization.
//!
//! The crate implements the compatible linear, quadratic and cubic
//! r-matrix brackets on gl(n,R), the canonical and quadratic brackets on
//! the cotangent bundle of GL(n,R), the Poisson reduction connecting the
//! two levels, and RK4 integration of the resulting Toda-type Lax flows.
//! Every structural identity is exposed as a residual operation so the
//! whole construction is machine-checkable; the `glpoisson` binary
//! drives the checks from the command line.

pub mod brackets;
pub mod cli;
pub mod cotangent;
pub mod error;
pub mod fields;
pub mod flows;
pub mod matcore;
pub mod rmat;
pub mod sample;
pub mod suites;
pub mod tolerances;

pub use error::{Error, Result};
