//! The real number whose digits are being studied, with certified
//! comparisons against rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::algebraic::AlgebraicReal;
use crate::arith::rational::fmt_rational;
use crate::arith::{BigReal, Dyadic, EvalContext, Rational, Round};
use crate::digits::gap::{gap_series_digits_ctx, GapSeriesSpec};
use crate::digits::stream::compute_digits;
use crate::digits::DigitSource;
use crate::words::FiniteWord;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Subject {
    /// Exact: comparisons with rationals are decided by sign evaluation.
    Algebraic(AlgebraicReal),
    /// Only known to lie in [lo, hi].
    Enclosure { lo: Rational, hi: Rational },
}

impl Subject {
    pub fn rational(q: &Rational) -> Subject {
        Subject::Algebraic(AlgebraicReal::from_rational(q))
    }

    /// Enclosure of a gap series from n certified digits: the digit prefix
    /// value plus at most b^-n.
    pub fn gap_series(spec: &GapSeriesSpec, n: usize, ctx: &EvalContext) -> Result<Subject> {
        let g = gap_series_digits_ctx(spec, n, ctx)?;
        Ok(Subject::from_prefix(&g.word))
    }

    /// [0.w, 0.w + b^-|w|].
    pub fn from_prefix(w: &FiniteWord) -> Subject {
        let q = super::digits_value(w.symbols(), w.base());
        let den = num_traits::pow(BigInt::from(w.base()), w.len());
        let lo = Rational::new(q.clone(), den.clone());
        let hi = Rational::new(q + 1, den);
        Subject::Enclosure { lo, hi }
    }

    /// The subject for certifying statements about `source`; gap series and
    /// Champernowne are enclosed by their first n digits.
    pub fn for_source(source: &DigitSource, base: u32, n: usize, ctx: &EvalContext) -> Result<Subject> {
        match source {
            DigitSource::Algebraic(x) => Ok(Subject::Algebraic(x.clone())),
            DigitSource::GapSeries(spec) => Subject::gap_series(spec, n, ctx),
            DigitSource::Champernowne => Ok(Subject::from_prefix(&compute_digits(source, base, n, ctx)?)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Subject::Algebraic(x) => x.to_f64(),
            Subject::Enclosure { lo, hi } => crate::arith::rational::to_f64(&((lo + hi) / Rational::from_integer(2.into()))),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Subject::Algebraic(x) => x.as_rational(),
            Subject::Enclosure { lo, hi } => (lo == hi).then(|| lo.clone()),
        }
    }

    /// Certified ordering of the subject against q, None when an enclosure
    /// contains q in its interior.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        match self {
            Subject::Algebraic(x) => Some(x.cmp_rational(q)),
            Subject::Enclosure { lo, hi } => {
                if hi < q {
                    Some(Ordering::Less)
                } else if lo > q {
                    Some(Ordering::Greater)
                } else if lo == hi {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
        }
    }

    /// |x - q| <= e (strict: < e), decided exactly or reported uncertifiable.
    pub fn within(&self, q: &Rational, e: &Rational, strict: bool) -> Result<bool> {
        let what = || Error::cert(format!("enclosure too wide to compare with {}", fmt_rational(q)));
        let lo = self.cmp_rational(&(q - e)).ok_or_else(what)?;
        let hi = self.cmp_rational(&(q + e)).ok_or_else(what)?;
        Ok(if strict {
            lo == Ordering::Greater && hi == Ordering::Less
        } else {
            lo != Ordering::Less && hi != Ordering::Greater
        })
    }

    /// Enclosure of absolute width about 2^-bits (or the given interval).
    pub fn enclosure(&self, bits: u32) -> BigReal {
        match self {
            Subject::Algebraic(x) => x.enclosure(bits),
            Subject::Enclosure { lo, hi } => {
                let p = bits + 64;
                let a = Dyadic::from_rational(lo, p, Round::Down);
                let b = Dyadic::from_rational(hi, p, Round::Up);
                BigReal::from_bounds(a, b, p)
            }
        }
    }

    /// u x + v.
    pub fn affine(&self, u: &Rational, v: &Rational) -> Result<Subject> {
        match self {
            Subject::Algebraic(x) => Ok(Subject::Algebraic(x.affine(u, v)?)),
            Subject::Enclosure { lo, hi } => {
                let (mut a, mut b) = (u * lo + v, u * hi + v);
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                Ok(Subject::Enclosure { lo: a, hi: b })
            }
        }
    }

    pub fn scale(&self, m: &BigInt) -> Result<Subject> {
        self.affine(&Rational::from_integer(m.clone()), &Rational::from_integer(0.into()))
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Algebraic(x) => write!(f, "{x}"),
            Subject::Enclosure { lo, hi } => write!(f, "[{}, {}]", fmt_rational(lo), fmt_rational(hi)),
        }
    }
}
