//! Certified digit expansions: algebraic numbers, gap series and
//! Champernowne's number, with an on-disk cache.

pub mod algebraic;
pub mod cache;
pub mod champernowne;
pub mod gap;
pub mod stream;

pub use algebraic::{digits_of_algebraic, digits_of_algebraic_ctx};
pub use cache::{cache_load, cache_path, cache_read, cache_store, cached_digits};
pub use champernowne::champernowne_digits;
pub use gap::{gap_series_digits, sparse_series_spec, CoefficientRule, ExponentRule, GapSeriesSpec};
pub use stream::{DigitSource, DigitStream};
