//! Digit sources and growable, certified digit streams.

use std::fmt;

use super::algebraic::digits_of_algebraic_ctx;
use super::champernowne::champernowne_digits;
use super::gap::{gap_series_digits_ctx, GapSeriesSpec};
use crate::algebraic::AlgebraicReal;
use crate::arith::EvalContext;
use crate::error::{Error, Result};
use crate::words::FiniteWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitSource {
    Algebraic(AlgebraicReal),
    GapSeries(GapSeriesSpec),
    Champernowne,
}

impl DigitSource {
    /// Text recorded in cache headers, e.g. `alg [-1,2,1] 0 1`.
    pub fn spec_string(&self) -> String {
        match self {
            DigitSource::Algebraic(x) => format!("alg {x}"),
            DigitSource::GapSeries(s) => format!("gap {s}"),
            DigitSource::Champernowne => "champernowne".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<DigitSource> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("alg ") {
            Ok(DigitSource::Algebraic(AlgebraicReal::parse(rest)?))
        } else if let Some(rest) = s.strip_prefix("gap ") {
            Ok(DigitSource::GapSeries(GapSeriesSpec::parse(rest)?))
        } else if s == "champernowne" {
            Ok(DigitSource::Champernowne)
        } else {
            Err(Error::invalid(format!("unknown digit source `{s}`")))
        }
    }
}

impl fmt::Display for DigitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// Digits of a source in a fixed base, extended on demand.
#[derive(Clone, Debug)]
pub struct DigitStream {
    source: DigitSource,
    base: u32,
    ctx: EvalContext,
    digits: Vec<u8>,
}

impl DigitStream {
    pub fn new(source: DigitSource, base: u32, ctx: EvalContext) -> Result<DigitStream> {
        crate::words::word::check_base(base)?;
        if let DigitSource::GapSeries(s) = &source {
            if s.base() != base {
                return Err(Error::invalid(format!("gap series is defined in base {}, not {base}", s.base())));
            }
        }
        Ok(DigitStream { source, base, ctx, digits: Vec::new() })
    }

    /// A stream over digits obtained elsewhere, for storing in the cache.
    pub fn from_digits(source: DigitSource, base: u32, digits: Vec<u8>) -> Result<DigitStream> {
        crate::words::word::check_base(base)?;
        if digits.iter().any(|&d| d as u32 >= base) {
            return Err(Error::invalid(format!("digit out of range for base {base}")));
        }
        Ok(DigitStream::from_parts(source, base, digits))
    }

    pub(crate) fn from_parts(source: DigitSource, base: u32, digits: Vec<u8>) -> DigitStream {
        DigitStream { source, base, ctx: EvalContext::default(), digits }
    }

    pub fn source(&self) -> &DigitSource {
        &self.source
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Makes at least n digits available. Algebraic and gap-series digits
    /// are recomputed for the larger count, which is certified as a whole.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n <= self.digits.len() {
            return Ok(());
        }
        let target = n.max(self.digits.len() * 2);
        let w = compute_digits(&self.source, self.base, target, &self.ctx)?;
        debug_assert!(w.symbols().starts_with(&self.digits));
        self.digits = w.into_symbols();
        Ok(())
    }

    pub fn word(&self, n: usize) -> Result<FiniteWord> {
        if n > self.digits.len() {
            return Err(Error::invalid(format!("only {} digits available", self.digits.len())));
        }
        FiniteWord::new(self.digits[..n].to_vec(), self.base)
    }
}

pub fn compute_digits(source: &DigitSource, base: u32, n: usize, ctx: &EvalContext) -> Result<FiniteWord> {
    match source {
        DigitSource::Algebraic(x) => digits_of_algebraic_ctx(x, base, n, ctx),
        DigitSource::GapSeries(s) => Ok(gap_series_digits_ctx(s, n, ctx)?.word),
        DigitSource::Champernowne => champernowne_digits(base, n),
    }
}
