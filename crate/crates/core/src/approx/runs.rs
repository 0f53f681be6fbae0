//! Approximants read off the runs of equal digits, and the Liouville
//! threshold after which consecutive run ends at most grow by a factor 2d.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::subject::Subject;
use super::{digits_value, ser_int};
use crate::algebraic::{height, mahler_measure_exact, AlgebraicReal};
use crate::arith::rational::fmt_rational;
use crate::arith::{BigReal, EvalContext, Rational};
use crate::digits::stream::DigitStream;
use crate::digits::DigitSource;
use crate::error::{Error, Result};
use crate::words::{run_boundaries, FiniteWord};

/// Which run ends to process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunLimit {
    /// j = 1..=count.
    Count(usize),
    /// All j with n_j <= n.
    MaxN(usize),
}

/// xi_j = P_j(b) / (b^n_j (b - 1)): the first n_j digits followed by
/// a_{n_j + 1} repeated.
#[derive(Clone, Debug, Serialize)]
pub struct RunApproximant {
    pub j: usize,
    pub n_j: usize,
    pub n_next: usize,
    #[serde(serialize_with = "ser_int")]
    pub p: BigInt,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub base: u32,
    /// Digits dropped so that the shifted number starts with b - 1.
    pub shift: usize,
    pub runs: Vec<RunApproximant>,
    pub digits_used: usize,
    pub note: Option<String>,
}

const MAX_RUN_DIGITS: usize = 1 << 18;
const NO_START_LIMIT: usize = 1 << 12;

fn enough(bounds: &[usize], limit: RunLimit) -> bool {
    match limit {
        RunLimit::Count(c) => bounds.len() > c,
        RunLimit::MaxN(n) => bounds.last().map(|&l| l > n).unwrap_or(false),
    }
}

/// Digits (from `start`, located by `find_start`) until the limit's run ends
/// and their successors are known. Returns the digits, the offset and the
/// run ends of the shifted word, or None for the offset when no start was
/// found within the budget.
fn collect(
    source: &DigitSource,
    base: u32,
    limit: RunLimit,
    find_start: impl Fn(&[u8]) -> Option<usize>,
    ctx: &EvalContext,
) -> Result<(Vec<u8>, Option<usize>, Vec<usize>)> {
    let mut stream = DigitStream::new(source.clone(), base, ctx.clone())?;
    let mut len = 256;
    loop {
        stream.ensure(len)?;
        let d = stream.digits()[..len].to_vec();
        let start = find_start(&d);
        let bounds = match start {
            Some(k) => run_boundaries(&FiniteWord::new(d[k..].to_vec(), base)?),
            None => Vec::new(),
        };
        let done = match start {
            Some(_) => enough(&bounds, limit) || len >= MAX_RUN_DIGITS,
            None => len >= NO_START_LIMIT,
        };
        if done {
            return Ok((d, start, bounds));
        }
        len = (len * 2).min(MAX_RUN_DIGITS);
    }
}

fn selected(bounds: &[usize], limit: RunLimit) -> usize {
    let avail = bounds.len().saturating_sub(1);
    match limit {
        RunLimit::Count(c) => c.min(avail),
        RunLimit::MaxN(n) => bounds[..avail].iter().take_while(|&&b| b <= n).count(),
    }
}

/// Run approximants of x after shifting its digits to the first b - 1, each
/// certified exactly to satisfy |(b-1) x - P_j / b^n_j| < (b-1) b^(-n_{j+1})
/// and b not dividing P_j. Either failing is an error.
pub fn run_approximants(source: &DigitSource, base: u32, limit: RunLimit, ctx: &EvalContext) -> Result<RunReport> {
    let top = (base - 1) as u8;
    let (digits, start, bounds) = collect(source, base, limit, |d| d.iter().position(|&a| a == top), ctx)?;
    let mut report = RunReport { base, shift: start.unwrap_or(0), runs: Vec::new(), digits_used: digits.len(), note: None };
    let Some(k) = start else {
        report.note = Some(format!("no digit {top} among the first {} digits", digits.len()));
        return Ok(report);
    };
    let count = selected(&bounds, limit);
    if !enough(&bounds, limit) {
        report.note = Some(format!("digit budget of {} reached with {} complete runs", digits.len(), count));
    }
    if count == 0 {
        return Ok(report);
    }
    let b = BigInt::from(base);
    let a = &digits[k..];
    // x' = b^k x - [a_1..a_k], then (b - 1) x'
    let x = Subject::for_source(source, base, digits.len() + 64, ctx)?;
    let shifted = x.affine(&Rational::from_integer(num_traits::pow(b.clone(), k)), &-Rational::from_integer(digits_value(&digits[..k], base)))?;
    let scaled = shifted.affine(&Rational::from_integer(b.clone() - 1), &Rational::zero())?;
    let mut acc = BigInt::zero();
    let mut pos = 0;
    let mut bn = BigInt::one();
    for j in 1..=count {
        let (n, next) = (bounds[j - 1], bounds[j]);
        while pos < n {
            acc = acc * &b + BigInt::from(a[pos]);
            bn *= &b;
            pos += 1;
        }
        let p: BigInt = (&b - 1) * &acc + BigInt::from(a[n]);
        if (&p % &b).is_zero() {
            return Err(Error::cert(format!("base {base} divides P_{j} = {p}")));
        }
        let q = Rational::new(p.clone(), bn.clone());
        let e = Rational::new(&b - 1, num_traits::pow(b.clone(), next));
        if !scaled.within(&q, &e, true)? {
            return Err(Error::cert(format!("|(b-1) x - P_{j}/b^{n}| < (b-1) b^-{next} fails")));
        }
        let value = Rational::new(p.clone(), &bn * (&b - 1));
        report.runs.push(RunApproximant { j, n_j: n, n_next: next, p, value: fmt_rational(&value) });
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleReport {
    pub base: u32,
    pub degree: usize,
    /// U = 1 + 3 H((b - 1) x).
    pub u: String,
    pub u_f64: f64,
    /// Pairs (n_j, n_{j+1}) with n_j >= U that were checked.
    pub checked: usize,
    /// (j, n_j, n_{j+1}) with n_j >= U and n_{j+1} > 2 d n_j.
    pub violations: Vec<(usize, usize, usize)>,
    pub digits_used: usize,
}

/// Liouville threshold of an algebraic irrational x in (0, 1) in base b and
/// the doubling check n_{j+1} <= 2 d n_j over the runs of x itself.
pub fn liouville_threshold(x: &AlgebraicReal, base: u32, limit: RunLimit, ctx: &EvalContext) -> Result<LiouvilleReport> {
    if x.degree() < 2 {
        return Err(Error::invalid("the Liouville threshold needs an irrational algebraic number"));
    }
    let d = x.degree();
    let y = x.affine(&Rational::from_integer((base - 1).into()), &Rational::zero())?;
    let h = height(&y, ctx)?;
    let w = h.prec();
    let u = BigReal::one(w).add(&h.mul(&BigReal::from_int(3, w)));
    let (digits, _, bounds) = collect(&DigitSource::Algebraic(x.clone()), base, limit, |_| Some(0), ctx)?;
    let mut report = LiouvilleReport {
        base,
        degree: d,
        u: u.to_sci(20),
        u_f64: u.to_f64(),
        checked: 0,
        violations: Vec::new(),
        digits_used: digits.len(),
    };
    // n >= 1 + 3 H decided exactly when M is rational: ((n - 1)/3)^d >= M
    let exact_m = mahler_measure_exact(y.poly())?;
    for j in 1..=selected(&bounds, limit) {
        let (n, next) = (bounds[j - 1], bounds[j]);
        let above = match BigReal::from_int(n as u64, w).cmp_certified(&u) {
            Some(o) => o != std::cmp::Ordering::Less,
            None if exact_m.is_some() => {
                let t = Rational::new(BigInt::from(n) - 1, BigInt::from(3));
                num_traits::pow(t, d) >= *exact_m.as_ref().unwrap()
            }
            None => ctx.decide("n_j against U", |w| {
                let hw = height(&y, &EvalContext { precision_bits: w, cap_bits: ctx.cap_bits })?;
                let uw = BigReal::one(w).add(&hw.mul(&BigReal::from_int(3, w)));
                Ok(BigReal::from_int(n as u64, w).cmp_certified(&uw).map(|o| o != std::cmp::Ordering::Less))
            })?,
        };
        if !above {
            continue;
        }
        report.checked += 1;
        if next > 2 * d * n {
            report.violations.push((j, n, next));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::sqrt2_minus_1;
    use crate::arith::rational::rat;

    #[test]
    fn threshold_equal_to_a_run_end() {
        // U = 1 + 3 H(9 (sqrt 2 - 1)) = 28 exactly
        let r = liouville_threshold(&sqrt2_minus_1(), 10, RunLimit::MaxN(200), &EvalContext::default()).unwrap();
        assert_eq!(r.u_f64, 28.0);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn three_quarters() {
        // 0.110111... in base 2: n_1 = 2 and xi_1 = 0.11 followed by zeros
        let x = AlgebraicReal::from_rational(&rat(55, 64));
        let r = run_approximants(&DigitSource::Algebraic(x), 2, RunLimit::Count(1), &EvalContext::default()).unwrap();
        assert_eq!(r.shift, 0);
        assert_eq!(r.runs[0].n_j, 2);
        assert_eq!(r.runs[0].p, BigInt::from(3));
        assert_eq!(r.runs[0].value, "3/4");
    }

    #[test]
    fn constant_digits_have_no_runs() {
        let x = AlgebraicReal::from_rational(&rat(1, 3));
        let r = run_approximants(&DigitSource::Algebraic(x), 4, RunLimit::Count(3), &EvalContext::default()).unwrap();
        assert!(r.runs.is_empty());
        assert!(r.note.is_some());
    }

    #[test]
    fn sqrt2_base_ten() {
        let r = run_approximants(&DigitSource::Algebraic(sqrt2_minus_1()), 10, RunLimit::Count(20), &EvalContext::default()).unwrap();
        assert_eq!(r.runs.len(), 20);
    }

    #[test]
    fn liouville_sqrt2() {
        let rep = liouville_threshold(&sqrt2_minus_1(), 2, RunLimit::Count(30), &EvalContext::default()).unwrap();
        assert!((rep.u_f64 - 5.66132192209011).abs() < 1e-9);
        assert!(rep.violations.is_empty());
        assert!(liouville_threshold(&AlgebraicReal::from_rational(&rat(1, 3)), 2, RunLimit::Count(3), &EvalContext::default()).is_err());
    }
}
