//! Exact and interval arithmetic shared by the rest of the crate.

pub mod context;
pub mod dyadic;
pub mod iterated;
pub mod padic;
pub mod primes;
pub mod rational;
pub mod real;

pub use context::{eval_context, EvalContext};
pub use num_bigint::{BigInt, BigUint};
pub use dyadic::{Dyadic, Round};
pub use iterated::{iterated_exp, iterated_log};
pub use padic::{padic_abs, product_formula_check, valuation, Place};
pub use rational::{parse_rational, Rational};
pub use real::BigReal;
