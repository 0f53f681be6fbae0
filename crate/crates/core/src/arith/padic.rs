//! Normalised absolute values on the rationals.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::primes::{is_prime, prime_divisors};
use super::rational::{abs_numer, denom_u, Rational};
use crate::error::{Error, Result};

/// A place of the rationals: the archimedean one or a prime.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Inf,
    P(BigUint),
}

impl Place {
    /// Parses `inf` or a prime written in decimal.
    pub fn parse(s: &str) -> Result<Place> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Place::Inf);
        }
        let p: BigUint = s.parse().map_err(|_| Error::invalid(format!("bad place `{s}`")))?;
        if !is_prime(&p) {
            return Err(Error::invalid(format!("place `{s}` is not a prime")));
        }
        Ok(Place::P(p))
    }

    /// ‖x‖ at this place: |x| at infinity, p^(-v_p(x)) otherwise.
    pub fn abs(&self, x: &Rational) -> Rational {
        match self {
            Place::Inf => x.abs(),
            Place::P(p) => padic_abs_unchecked(x, p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Inf => write!(f, "inf"),
            Place::P(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exponent of p in the nonzero integer n.
pub fn valuation_int(n: &BigInt, p: &BigUint) -> u64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: &BigUint) -> i64 {
    valuation_int(x.numer(), p) as i64 - valuation_int(x.denom(), p) as i64
}

fn padic_abs_unchecked(x: &Rational, p: &BigUint) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let v = valuation(x, p);
    let pp = Rational::from_integer(BigInt::from(p.clone()));
    super::rational::pow_i(&pp, -v)
}

/// |x|_p = p^(-v_p(x)), with |0|_p = 0.
pub fn padic_abs(x: &Rational, p: &BigUint) -> Result<Rational> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(padic_abs_unchecked(x, p))
}

/// Primes dividing the numerator or the denominator of x.
pub fn support(x: &Rational) -> BTreeSet<BigUint> {
    let mut s = BTreeSet::new();
    for n in [abs_numer(x), denom_u(x)] {
        if !n.is_zero() && !n.is_one() {
            s.extend(prime_divisors(&n));
        }
    }
    s
}

/// The archimedean place followed by every prime in the support of the inputs.
pub fn places_of<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Vec<Place> {
    let mut primes = BTreeSet::new();
    for x in xs {
        if !x.is_zero() {
            primes.extend(support(x));
        }
    }
    std::iter::once(Place::Inf).chain(primes.into_iter().map(Place::P)).collect()
}

/// Product of ‖x‖_v over all places, evaluated one place at a time.
pub fn product_formula_check(x: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::invalid("product formula needs x != 0"));
    }
    let mut prod = Rational::one();
    for v in places_of([x]) {
        prod *= v.abs(x);
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(n: u32) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn examples() {
        assert_eq!(padic_abs(&int(12), &p(2)).unwrap(), rat(1, 4));
        assert_eq!(padic_abs(&rat(3, 2), &p(2)).unwrap(), int(2));
        for q in [2u32, 3, 5, 101] {
            assert_eq!(padic_abs(&int(1), &p(q)).unwrap(), int(1));
        }
        assert_eq!(padic_abs(&int(0), &p(7)).unwrap(), int(0));
        assert!(padic_abs(&int(12), &p(4)).is_err());
        assert_eq!(product_formula_check(&int(6)).unwrap(), int(1));
        assert_eq!(product_formula_check(&int(1)).unwrap(), int(1));
        assert_eq!(product_formula_check(&rat(-5, 7)).unwrap(), int(1));
        assert!(product_formula_check(&int(0)).is_err());
    }

    #[test]
    fn place_parsing() {
        assert_eq!(Place::parse("inf").unwrap(), Place::Inf);
        assert_eq!(Place::parse("7").unwrap(), Place::P(p(7)));
        assert!(Place::parse("9").is_err());
        assert_eq!(Place::P(p(7)).to_string(), "7");
    }
}
