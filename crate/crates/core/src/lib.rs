//! One-dimensional semiclassical barrier scattering: WKB action integrals,
//! Airy connection formulas, reflection-amplitude iteration and an exact
//! finite-difference oracle to check them against.

// NaN must fail range checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod connection;
pub mod error;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod reflection;
pub mod special_fn;
pub mod verify;
pub mod wkb;

pub use error::{Error, ErrorClass, Result};
