//! Real algebraic numbers and their heights.

pub mod complex;
pub mod heights;
pub mod poly;
pub mod real_root;

pub use heights::{euclidean_height, height, inhom_height, mahler_measure, mahler_measure_exact, RationalLinearForm};
pub use poly::Poly;
pub use real_root::{sqrt2_minus_1, AlgebraicReal};
