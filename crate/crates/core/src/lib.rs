//! Exact Koszul cohomology of plane curve models over prime fields.

pub mod arith;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod koszul;
pub mod linalg;
pub mod plane;

pub use error::{Error, Result};
