//! Gap series sum_j a_j b^(-n_j) with non-decreasing exponents.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebraic::int_to_digits;
use crate::arith::rational::{fmt_rational, parse_rational};
use crate::arith::{BigReal, EvalContext, Rational};
use crate::error::{Error, Result};
use crate::words::word::check_base;
use crate::words::FiniteWord;

/// Exponents n_1 <= n_2 <= ... (1-based index j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentRule {
    /// A finite explicit list.
    List(Vec<u64>),
    /// n_j = start + step (j - 1).
    Linear { start: u64, step: u64 },
    /// n_j = ratio^j.
    Geometric { ratio: u64 },
    /// n_j = 2^floor(j^eta).
    PowFloor { eta: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientRule {
    Constant(u64),
    /// A finite explicit list; the series stops when either list ends.
    List(Vec<u64>),
}

/// Stand-in for exponents that do not fit in 64 bits.
const FAR: u64 = u64::MAX;

impl ExponentRule {
    /// n_j, `None` past the end of a finite list, `FAR` on overflow.
    pub fn nth(&self, j: u64) -> Option<u64> {
        assert!(j >= 1);
        match self {
            ExponentRule::List(v) => v.get((j - 1) as usize).copied(),
            ExponentRule::Linear { start, step } => Some(step.checked_mul(j - 1).and_then(|t| t.checked_add(*start)).unwrap_or(FAR)),
            ExponentRule::Geometric { ratio } => Some(u32::try_from(j).ok().and_then(|j| ratio.checked_pow(j)).unwrap_or(FAR)),
            ExponentRule::PowFloor { eta } => {
                let k = floor_pow(j, eta);
                Some(if k < 64 { 1u64 << k } else { FAR })
            }
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self, ExponentRule::List(_))
    }

    fn parse(s: &str) -> Result<ExponentRule> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::invalid(format!("bad exponent rule `{s}`")))?;
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::invalid(format!("bad number `{t}`")));
        let r = match kind {
            "list" => ExponentRule::List(arg.split(',').map(num).collect::<Result<_>>()?),
            "linear" => {
                let (a, b) = arg.split_once(':').ok_or_else(|| Error::invalid("linear:START:STEP expected"))?;
                ExponentRule::Linear { start: num(a)?, step: num(b)? }
            }
            "geom" => ExponentRule::Geometric { ratio: num(arg)? },
            "floorpow" => ExponentRule::PowFloor { eta: parse_rational(arg)? },
            _ => return Err(Error::invalid(format!("unknown exponent rule `{kind}`"))),
        };
        Ok(r)
    }
}

impl fmt::Display for ExponentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentRule::List(v) => write!(f, "list:{}", join(v)),
            ExponentRule::Linear { start, step } => write!(f, "linear:{start}:{step}"),
            ExponentRule::Geometric { ratio } => write!(f, "geom:{ratio}"),
            ExponentRule::PowFloor { eta } => write!(f, "floorpow:{}", fmt_rational(eta)),
        }
    }
}

impl CoefficientRule {
    pub fn nth(&self, j: u64) -> Option<u64> {
        match self {
            CoefficientRule::Constant(a) => Some(*a),
            CoefficientRule::List(v) => v.get((j - 1) as usize).copied(),
        }
    }

    fn parse(s: &str) -> Result<CoefficientRule> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::invalid(format!("bad coefficient rule `{s}`")))?;
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::invalid(format!("bad number `{t}`")));
        match kind {
            "const" => Ok(CoefficientRule::Constant(num(arg)?)),
            "list" => Ok(CoefficientRule::List(arg.split(',').map(num).collect::<Result<_>>()?)),
            _ => Err(Error::invalid(format!("unknown coefficient rule `{kind}`"))),
        }
    }
}

impl fmt::Display for CoefficientRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRule::Constant(a) => write!(f, "const:{a}"),
            CoefficientRule::List(v) => write!(f, "list:{}", join(v)),
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// floor(j^eta) for rational eta > 0, exactly.
pub fn floor_pow(j: u64, eta: &Rational) -> u64 {
    let p = eta.numer().to_biguint().unwrap();
    let q = eta.denom().to_biguint().unwrap();
    let p: u32 = (&p).try_into().expect("eta numerator too large");
    let q: u32 = (&q).try_into().expect("eta denominator too large");
    let v = num_bigint::BigUint::from(j).pow(p).nth_root(q);
    (&v).try_into().unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSeriesSpec {
    base: u32,
    exponents: ExponentRule,
    coefficients: CoefficientRule,
    /// Set for specs whose gap and coefficient hypotheses were validated.
    theta: Option<Rational>,
}

impl GapSeriesSpec {
    pub fn new(base: u32, exponents: ExponentRule, coefficients: CoefficientRule) -> Result<GapSeriesSpec> {
        check_base(base)?;
        match &exponents {
            ExponentRule::List(v) => {
                if v.iter().any(|&n| n == 0) || v.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::invalid("exponent list must be positive and non-decreasing"));
                }
            }
            ExponentRule::Linear { start, .. } if *start == 0 => return Err(Error::invalid("exponents start at 1")),
            ExponentRule::Geometric { ratio } if *ratio < 2 => return Err(Error::invalid("geometric ratio must be >= 2")),
            ExponentRule::PowFloor { eta } if *eta <= Rational::zero() => return Err(Error::invalid("eta must be positive")),
            _ => {}
        }
        let bad_coeff = match &coefficients {
            CoefficientRule::Constant(a) => *a == 0,
            CoefficientRule::List(v) => v.contains(&0),
        };
        if bad_coeff {
            return Err(Error::invalid("coefficients must be >= 1"));
        }
        Ok(GapSeriesSpec { base, exponents, coefficients, theta: None })
    }

    /// sum_j b^(-2^floor(j^eta)) in base b.
    pub fn pow_floor(base: u32, eta: Rational) -> Result<GapSeriesSpec> {
        GapSeriesSpec::new(base, ExponentRule::PowFloor { eta }, CoefficientRule::Constant(1))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn exponents(&self) -> &ExponentRule {
        &self.exponents
    }

    pub fn coefficients(&self) -> &CoefficientRule {
        &self.coefficients
    }

    pub fn theta(&self) -> Option<&Rational> {
        self.theta.as_ref()
    }

    /// (n_j, a_j), or `None` once either rule is exhausted.
    pub fn term(&self, j: u64) -> Option<(u64, u64)> {
        Some((self.exponents.nth(j)?, self.coefficients.nth(j)?))
    }

    fn is_finite(&self) -> bool {
        self.exponents.is_finite() || matches!(self.coefficients, CoefficientRule::List(_))
    }

    /// Parses `b=2 n=geom:4 a=const:1 [theta=1/2]`.
    pub fn parse(s: &str) -> Result<GapSeriesSpec> {
        let (mut b, mut n, mut a, mut theta) = (None, None, None, None);
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::invalid(format!("expected key=value, got `{tok}`")))?;
            match k {
                "b" => b = Some(v.parse::<u32>().map_err(|_| Error::invalid(format!("bad base `{v}`")))?),
                "n" => n = Some(ExponentRule::parse(v)?),
                "a" => a = Some(CoefficientRule::parse(v)?),
                "theta" => theta = Some(parse_rational(v)?),
                _ => return Err(Error::invalid(format!("unknown gap-series key `{k}`"))),
            }
        }
        let mut spec = GapSeriesSpec::new(
            b.ok_or_else(|| Error::invalid("missing b="))?,
            n.ok_or_else(|| Error::invalid("missing n="))?,
            a.unwrap_or(CoefficientRule::Constant(1)),
        )?;
        spec.theta = theta;
        Ok(spec)
    }

    /// Conservative bound on the tail sum_{j >= j0} a_j b^(-n_j), given that
    /// all terms before j0 have been summed. Returned as (c, e) meaning
    /// c * b^(-e); `None` if the rule-specific bound is not yet valid.
    fn tail_bound(&self, j0: u64) -> Result<Option<(BigInt, u64)>> {
        let b = BigInt::from(self.base);
        if self.is_finite() {
            // exact remainder over a common exponent
            let mut terms = Vec::new();
            let mut j = j0;
            while let Some((n, a)) = self.term(j) {
                if n == FAR {
                    return Err(Error::invalid("exponent too large"));
                }
                terms.push((n, a));
                j += 1;
            }
            let e = terms.iter().map(|t| t.0).max().unwrap_or(0);
            let mut c = BigInt::zero();
            for (n, a) in terms {
                c += BigInt::from(a) * num_traits::pow(b.clone(), (e - n) as usize);
            }
            return Ok(Some((c, e)));
        }
        let CoefficientRule::Constant(a) = self.coefficients else { unreachable!() };
        let n0 = self.exponents.nth(j0).unwrap_or(FAR);
        match &self.exponents {
            ExponentRule::Linear { step: 0, .. } => Err(Error::invalid("constant exponents make the series diverge")),
            // strictly increasing exponents: tail <= a b^(-n0) * b/(b-1) <= 2a b^(-n0)
            ExponentRule::Linear { .. } | ExponentRule::Geometric { .. } => Ok(Some((BigInt::from(2 * a as u128), n0))),
            ExponentRule::PowFloor { eta } => {
                // #{j : floor(j^eta) = k} <= (k+1)^ceil(1/eta); the k-sum halves
                // term to term once 2^k >= 1/eta + 1
                let k = floor_pow(j0, eta);
                let inv = (eta.recip()).ceil().to_integer();
                let inv: u32 = (&inv).try_into().map_err(|_| Error::invalid("eta too small"))?;
                if Rational::from_integer(BigInt::one() << k) < eta.recip() + Rational::one() {
                    return Ok(None);
                }
                let c = BigInt::from(2 * a) * num_traits::pow(BigInt::from(k + 1), inv as usize);
                Ok(Some((c, n0)))
            }
            ExponentRule::List(_) => unreachable!(),
        }
    }
}

impl fmt::Display for GapSeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} n={} a={}", self.base, self.exponents, self.coefficients)?;
        if let Some(t) = &self.theta {
            write!(f, " theta={}", fmt_rational(t))?;
        }
        Ok(())
    }
}

/// Digits plus the exact partial sum over all j with n_j <= N, stored as
/// numer / b^N.
#[derive(Clone, Debug)]
pub struct GapDigits {
    pub word: FiniteWord,
    pub partial_numer: BigInt,
    pub partial_exp: u64,
}

impl GapDigits {
    pub fn partial_sum(&self) -> Rational {
        Rational::new(self.partial_numer.clone(), num_traits::pow(BigInt::from(self.word.base()), self.partial_exp as usize))
    }
}

/// Exact sum of the first `count` terms.
pub fn partial_sum_terms(spec: &GapSeriesSpec, count: u64) -> Result<Rational> {
    let mut s = Rational::zero();
    let b = Rational::from_integer(BigInt::from(spec.base));
    for j in 1..=count {
        let Some((n, a)) = spec.term(j) else { break };
        if n == FAR {
            return Err(Error::invalid("exponent too large"));
        }
        s += Rational::from_integer(BigInt::from(a)) / num_traits::pow(b.clone(), n as usize);
    }
    Ok(s)
}

const MAX_DIGITS: usize = 1 << 30;

/// The first n digits of the gap series. Terms are summed exactly up to
/// exponent n + guard; the guard grows until the tail bound cannot change
/// any emitted digit.
pub fn gap_series_digits_ctx(spec: &GapSeriesSpec, n: usize, ctx: &EvalContext) -> Result<GapDigits> {
    if n == 0 {
        return Err(Error::invalid("digit count must be at least 1"));
    }
    if n > MAX_DIGITS {
        return Err(Error::invalid(format!("digit count {n} exceeds 2^30")));
    }
    let b = BigInt::from(spec.base);
    let mut guard: u64 = 16;
    loop {
        let m = n as u64 + guard;
        // A = sum_{n_j <= m} a_j b^(m - n_j)
        let bm = pow_b(&b, spec.base, m);
        let mut acc = BigInt::zero();
        let mut j = 1u64;
        loop {
            match spec.term(j) {
                Some((nj, aj)) if nj <= m => {
                    acc += BigInt::from(aj) * pow_b(&b, spec.base, m - nj);
                    if acc >= bm {
                        return Err(Error::invalid("partial sum reaches 1; the coefficient rule diverges"));
                    }
                    j += 1;
                }
                _ => break,
            }
        }
        let tail = spec.tail_bound(j)?;
        let gb = pow_b(&b, spec.base, guard);
        let (q, r) = num_integer::Integer::div_rem(&acc, &gb);
        let ok = match &tail {
            None => false,
            Some((c, _)) if c.is_zero() => true,
            Some((c, e)) => {
                // r / b^g + b^n c / b^e < 1, with e clamped to m + 64 + bits(c)
                let e = (*e).min(m + 64 + c.bits());
                debug_assert!(e > m);
                let lhs = &r * pow_b(&b, spec.base, e - m) + c;
                lhs < pow_b(&b, spec.base, e - n as u64)
            }
        };
        if ok {
            let word = FiniteWord::new(int_to_digits(&q, spec.base, n), spec.base)?;
            return Ok(GapDigits { word, partial_numer: partial_numer(spec, n), partial_exp: n as u64 });
        }
        if guard >= ctx.cap_bits as u64 {
            return Err(Error::PrecisionCap { cap: ctx.cap_bits, what: format!("certifying {n} digits of gap series {spec}") });
        }
        guard *= 2;
    }
}

/// sum_{n_j <= n} a_j b^(n - n_j) as an exact integer.
fn partial_numer(spec: &GapSeriesSpec, n: usize) -> BigInt {
    let b = BigInt::from(spec.base);
    let mut acc = BigInt::zero();
    let mut j = 1;
    while let Some((nj, aj)) = spec.term(j) {
        if nj > n as u64 {
            break;
        }
        acc += BigInt::from(aj) * pow_b(&b, spec.base, n as u64 - nj);
        j += 1;
    }
    acc
}

fn pow_b(b: &BigInt, base: u32, e: u64) -> BigInt {
    if base.is_power_of_two() {
        BigInt::one() << (e * base.trailing_zeros() as u64)
    } else {
        num_traits::pow(b.clone(), e as usize)
    }
}

pub fn gap_series_digits(spec: &GapSeriesSpec, n: usize) -> Result<GapDigits> {
    gap_series_digits_ctx(spec, n, &EvalContext::default())
}

/// Checks the hypotheses of the transcendence criterion for gap series with
/// coefficients: n_1 >= 3, n_{j+1} >= (1 + loglog n_j / (log n_j)^(1/3)) n_j,
/// a_{j+1} <= b^(theta (n_{j+1} - n_j)) and gcd(a_j, b) = 1 for j below the
/// horizon. The first violated condition is reported with its index.
pub fn sparse_series_spec(
    base: u32,
    theta: Rational,
    exponents: ExponentRule,
    coefficients: CoefficientRule,
    horizon: u64,
) -> Result<GapSeriesSpec> {
    if !(Rational::zero() < theta && theta < Rational::one()) {
        return Err(Error::invalid("theta must lie in (0, 1)"));
    }
    let mut spec = GapSeriesSpec::new(base, exponents, coefficients)?;
    let ctx = EvalContext::new(64)?;
    let (n1, _) = spec.term(1).ok_or_else(|| Error::invalid("empty series"))?;
    if n1 < 3 {
        return Err(Error::invalid(format!("hypothesis fails at j=1: n_1 = {n1} < 3")));
    }
    for j in 1..=horizon {
        let Some((nj, aj)) = spec.term(j) else { break };
        if num_integer::Integer::gcd(&aj, &(base as u64)) != 1 {
            return Err(Error::invalid(format!("hypothesis fails at j={j}: gcd(a_j, b) = gcd({aj}, {base}) != 1")));
        }
        if j == horizon {
            break;
        }
        let Some((nk, ak)) = spec.term(j + 1) else { break };
        if nj == FAR || nk == FAR {
            return Err(Error::invalid(format!("exponent overflow at j={j}")));
        }
        let grows = ctx.decide("growth hypothesis", |w| {
            let x = BigReal::from_int(nj, w);
            let l = x.ln()?;
            let rhs = BigReal::one(w).add(&l.ln()?.div(&l.root(3)?)?).mul(&x);
            let next = BigReal::from_int(nk, w);
            Ok(if rhs.certainly_le(&next) {
                Some(true)
            } else if next.certainly_lt(&rhs) {
                Some(false)
            } else {
                None
            })
        })?;
        if !grows {
            return Err(Error::invalid(format!(
                "hypothesis fails at j={j}: n_(j+1) = {nk} < (1 + loglog n_j / (log n_j)^(1/3)) n_j with n_j = {nj}"
            )));
        }
        if ak > 1 {
            let ok = ctx.decide("coefficient hypothesis", |w| {
                let lhs = BigReal::from_int(ak, w).ln()?;
                let rhs = BigReal::from_rational(&theta, w).mul(&BigReal::from_int(nk - nj, w)).mul(&BigReal::from_int(base, w).ln()?);
                Ok(if lhs.certainly_le(&rhs) {
                    Some(true)
                } else if rhs.certainly_lt(&lhs) {
                    Some(false)
                } else {
                    // equality is only possible for integral powers; settle exactly
                    let e = &theta * Rational::from_integer(BigInt::from(nk - nj));
                    match (u32::try_from(e.numer()), u32::try_from(e.denom())) {
                        (Ok(p), Ok(q)) => {
                            Some(num_traits::pow(BigInt::from(ak), q as usize) <= num_traits::pow(BigInt::from(base), p as usize))
                        }
                        _ => None,
                    }
                })
            })?;
            if !ok {
                return Err(Error::invalid(format!(
                    "hypothesis fails at j={j}: a_(j+1) = {ak} > b^(theta (n_(j+1) - n_j))"
                )));
            }
        }
    }
    spec.theta = Some(theta);
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn examples() {
        let s = GapSeriesSpec::new(2, ExponentRule::Geometric { ratio: 2 }, CoefficientRule::Constant(1)).unwrap();
        let d = gap_series_digits(&s, 8).unwrap();
        assert_eq!(d.word.symbols(), &[0, 1, 0, 1, 0, 0, 0, 1]);
        assert_eq!(d.partial_sum(), rat(1, 4) + rat(1, 16) + rat(1, 256));
        let c = GapSeriesSpec::pow_floor(2, rat(3, 4)).unwrap();
        let ns: Vec<u64> = (1..=5).map(|j| c.term(j).unwrap().0).collect();
        assert_eq!(ns, vec![2, 2, 4, 4, 8]);
        assert_eq!(partial_sum_terms(&c, 5).unwrap(), rat(161, 256));
        let ninth = GapSeriesSpec::new(10, ExponentRule::Linear { start: 1, step: 1 }, CoefficientRule::Constant(1)).unwrap();
        assert!(gap_series_digits(&ninth, 50).unwrap().word.symbols().iter().all(|&d| d == 1));
    }

    #[test]
    fn repeated_exponents_carry() {
        // 1/2 + 1/2 * ... : exponents 2,2,2 in base 2 sum to 3/4
        let s = GapSeriesSpec::new(2, ExponentRule::List(vec![2, 2, 2]), CoefficientRule::Constant(1)).unwrap();
        assert_eq!(gap_series_digits(&s, 4).unwrap().word.symbols(), &[1, 1, 0, 0]);
        let big = GapSeriesSpec::new(2, ExponentRule::List(vec![1, 1]), CoefficientRule::Constant(1)).unwrap();
        assert!(gap_series_digits(&big, 4).is_err());
        let div = GapSeriesSpec::new(10, ExponentRule::Linear { start: 1, step: 0 }, CoefficientRule::Constant(1)).unwrap();
        assert!(gap_series_digits(&div, 4).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["b=2 n=geom:4 a=const:1", "b=10 n=linear:3:1 a=list:1,2,3", "b=2 n=floorpow:4/5 a=const:1 theta=1/2"] {
            assert_eq!(GapSeriesSpec::parse(s).unwrap().to_string(), s);
        }
        assert!(GapSeriesSpec::parse("b=2 n=bogus:1").is_err());
    }

    #[test]
    fn sparse_series_hypotheses() {
        let ok = sparse_series_spec(2, rat(1, 2), ExponentRule::Geometric { ratio: 4 }, CoefficientRule::Constant(1), 20);
        assert!(ok.is_ok());
        let lin = sparse_series_spec(2, rat(1, 2), ExponentRule::Linear { start: 3, step: 1 }, CoefficientRule::Constant(1), 20);
        let msg = lin.unwrap_err().to_string();
        assert!(msg.contains("j=2"), "{msg}");
        let gcd = sparse_series_spec(2, rat(1, 2), ExponentRule::Geometric { ratio: 4 }, CoefficientRule::Constant(2), 20);
        assert!(gcd.unwrap_err().to_string().contains("gcd"));
        let big_a = sparse_series_spec(3, rat(1, 2), ExponentRule::Geometric { ratio: 4 }, CoefficientRule::List(vec![1, 5, 1]), 3);
        // a_2 = 5 > 3^(6/2) = 27 is false, so accepted
        assert!(big_a.is_ok());
        let too_big = sparse_series_spec(3, rat(1, 4), ExponentRule::List(vec![4, 8]), CoefficientRule::List(vec![1, 5]), 2);
        // 5 > 3^(4/4) = 3
        assert!(too_big.is_err());
        assert!(sparse_series_spec(2, int(1), ExponentRule::Geometric { ratio: 4 }, CoefficientRule::Constant(1), 5).is_err());
    }
}
