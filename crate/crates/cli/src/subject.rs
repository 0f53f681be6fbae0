use std::path::Path;

use digitlab::algebraic::AlgebraicReal;
use digitlab::arith::{parse_rational, EvalContext, Rational};
use digitlab::digits::{cache_read, cached_digits, DigitSource, DigitStream};
use digitlab::words::FiniteWord;
use digitlab::Error;

use crate::cli::SubjectArgs;

/// Digit budgets beyond this are refused.
pub const MAX_DIGITS: usize = 1 << 30;
pub const DEFAULT_DIGITS: usize = 1 << 20;

pub struct Subject {
    pub source: DigitSource,
    pub base: u32,
    /// Digits read from --input.
    stored: Option<DigitStream>,
    n: Option<usize>,
}

fn algebraic(minpoly: &str, interval: &[String]) -> Result<AlgebraicReal, Error> {
    let m = minpoly.trim();
    let m = if m.starts_with('[') { m.to_string() } else { format!("[{m}]") };
    AlgebraicReal::parse(&format!("{m} {} {}", interval[0], interval[1]))
}

fn shifted(source: DigitSource, shift: Option<&str>) -> Result<DigitSource, Error> {
    let Some(s) = shift else {
        return Ok(source);
    };
    let q = parse_rational(s)?;
    match source {
        DigitSource::Algebraic(x) => Ok(DigitSource::Algebraic(x.affine(&Rational::from_integer(1.into()), &q)?)),
        _ => Err(Error::InvalidInput("--shift applies to algebraic numbers only".into())),
    }
}

impl Subject {
    pub fn resolve(a: &SubjectArgs) -> Result<Subject, Error> {
        if let Some(n) = a.n {
            if n == 0 || n > MAX_DIGITS {
                return Err(Error::InvalidInput(format!("digit count must lie in 1..=2^30, got {n}")));
            }
        }
        if let Some(path) = &a.input {
            if a.shift.is_some() {
                return Err(Error::InvalidInput("--shift cannot be combined with --input".into()));
            }
            let stream = cache_read(path)?;
            if let Some(b) = a.base {
                if b != stream.base() {
                    return Err(Error::SpecMismatch(format!("{} holds base {} digits, --base asks for {b}", path.display(), stream.base())));
                }
            }
            return Ok(Subject { source: stream.source().clone(), base: stream.base(), stored: Some(stream), n: a.n });
        }
        let source = match (&a.minpoly, &a.source) {
            (Some(m), None) => {
                let iv = a.interval.as_ref().ok_or_else(|| Error::InvalidInput("--minpoly needs --interval LO HI".into()))?;
                DigitSource::Algebraic(algebraic(m, iv)?)
            }
            (None, Some(s)) => DigitSource::parse(s)?,
            _ => return Err(Error::InvalidInput("give one of --minpoly/--interval, --source or --input".into())),
        };
        let source = shifted(source, a.shift.as_deref())?;
        let base = match (&source, a.base) {
            (DigitSource::GapSeries(spec), Some(b)) if b != spec.base() => {
                return Err(Error::InvalidInput(format!("the series is in base {}, --base asks for {b}", spec.base())))
            }
            (DigitSource::GapSeries(spec), _) => spec.base(),
            (_, b) => b.unwrap_or(2),
        };
        Ok(Subject { source, base, stored: None, n: a.n })
    }

    /// The requested digit count, the stored length for --input, or the default.
    pub fn n(&self) -> usize {
        self.n.or(self.stored.as_ref().map(|s| s.len())).unwrap_or(DEFAULT_DIGITS)
    }

    pub fn algebraic(&self) -> Result<&AlgebraicReal, Error> {
        match &self.source {
            DigitSource::Algebraic(x) => Ok(x),
            s => Err(Error::InvalidInput(format!("this command needs an algebraic number, got `{s}`"))),
        }
    }

    /// The first n digits: from --input when long enough, otherwise computed
    /// (through the cache directory when one is given).
    pub fn digits(&self, n: usize, cache: Option<&Path>, ctx: &EvalContext) -> Result<FiniteWord, Error> {
        if n > MAX_DIGITS {
            return Err(Error::InvalidInput(format!("{n} digits exceed the limit of 2^30")));
        }
        if let Some(s) = &self.stored {
            if s.len() >= n {
                return s.word(n);
            }
        }
        cached_digits(cache, &self.source, self.base, n, ctx)
    }
}
