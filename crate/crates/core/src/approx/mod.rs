//! Rational approximations read off the digit expansion: repetition
//! factorizations, periodic and run approximants, and brute-force scans of
//! the Ridout and Cugiani systems.

pub mod approximant;
pub mod convergents;
pub mod repetition;
pub mod runs;
pub mod scans;
pub mod subject;

pub use approximant::{all_approximants, approximant_from_factorization, repetition_sequence, PeriodicApproximant, RepetitionSequence, SequenceParams};
pub use convergents::{cf_of_rational, convergents};
pub use repetition::{best_repetition, best_repetition_brute, best_repetitions_all, Factorization};
pub use runs::{liouville_threshold, run_approximants, LiouvilleReport, RunApproximant, RunLimit, RunReport};
pub use scans::{cugiani_scan, ridout_solutions, CugianiReport, PlaceExponents, RidoutReport};
pub use subject::Subject;

use num_bigint::BigInt;

pub(crate) fn ser_int<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Integer with the given base-b digits, most significant first.
pub(crate) fn digits_value(d: &[u8], b: u32) -> BigInt {
    let bb = BigInt::from(b);
    d.iter().fold(BigInt::from(0), |acc, &x| acc * &bb + BigInt::from(x))
}
