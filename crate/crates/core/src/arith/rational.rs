//! Exact rationals. `BigRational` already keeps numerator and denominator
//! coprime with a positive denominator, so it is used directly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p/q` or a finite decimal such as `0.75`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("cannot parse rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let ip: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let fv: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = Rational::new(ip * &scale + fv, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// floor(q) as an integer.
pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn abs_numer(q: &Rational) -> BigUint {
    q.numer().abs().to_biguint().expect("absolute value is non-negative")
}

pub fn denom_u(q: &Rational) -> BigUint {
    q.denom().to_biguint().expect("denominator is positive")
}

/// q^e for a (possibly negative) integer exponent; q must be nonzero when e < 0.
pub fn pow_i(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// Exact comparison of a^ea with b^eb for positive rationals a, b and
/// rational exponents. Both sides are raised to the common denominator of
/// the exponents, so only integer powers are formed.
pub fn pow_cmp(a: &Rational, ea: &Rational, b: &Rational, eb: &Rational) -> Result<std::cmp::Ordering> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::invalid("pow_cmp needs positive bases"));
    }
    let d = ea.denom().lcm(eb.denom());
    let na = (ea * Rational::from_integer(d.clone())).to_integer();
    let nb = (eb * Rational::from_integer(d)).to_integer();
    // a^na / b^nb vs 1
    let small = |n: &BigInt| -> Result<i64> {
        use num_traits::ToPrimitive;
        n.to_i64().filter(|v| v.abs() <= 1 << 24).ok_or_else(|| Error::invalid("exponent too large for exact comparison"))
    };
    let (na, nb) = (small(&na)?, small(&nb)?);
    let lhs = pow_i(a, na) * pow_i(b, -nb);
    Ok(lhs.cmp(&Rational::one()))
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    // Scale so that both parts fit comfortably in an f64.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = |x: &BigInt, b: i64| -> (f64, i64) {
        if b > 900 {
            let s = (b - 900) as usize;
            ((x >> s).to_f64().unwrap_or(f64::NAN), s as i64)
        } else {
            (x.to_f64().unwrap_or(f64::NAN), 0)
        }
    };
    let (n, sn) = shift(q.numer(), nb);
    let (d, sd) = shift(q.denom(), db);
    (n / d) * 2f64.powi((sn - sd).clamp(-2000, 2000) as i32)
}
