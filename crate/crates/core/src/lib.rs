//! Certified digit expansions of algebraic numbers, subword complexity,
//! rational approximation experiments and explicit Diophantine bounds.

pub mod algebraic;
pub mod approx;
pub mod arith;
pub mod bounds;
pub mod digits;
pub mod error;
pub mod experiments;
pub mod twisted;
pub mod words;

pub use error::{Error, Result};
