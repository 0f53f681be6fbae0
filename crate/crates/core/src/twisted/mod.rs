//! Twisted heights over Q, small-point searches, successive infima, the
//! index of multihomogeneous polynomials and Roth's-lemma checks.

pub mod height;
pub mod index;
pub mod reduction_check;
pub mod search;
pub mod system;

pub use reduction_check::{reduction_check, InequalitySystem, ReductionCheck};
pub use index::{index, index_brute, roth_lemma_check, MultiHomPolynomial, RothReport};
pub use height::{rational_power, twisted_height, twisted_height_int, QPower, TwistedValue};
pub use search::{
    gap_principle_experiment, gap_principle_suite, infima_estimate, random_instance, search_small_points, search_small_points_brute,
    GapReport, GapSuiteReport, InfimaEstimate,
};
pub use system::{det, parse_system_json, script_h_of_forms, ExponentTuple, LinearFormSystemQ};
