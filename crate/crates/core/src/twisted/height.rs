//! Twisted heights H_Q(x) = prod_v max_i ‖L_iv(x)‖_v Q^(-c_iv), kept exact.
//!
//! Q is a rational power base^exp, so every value is coef * Q^e with a
//! rational coefficient and exponent. Comparisons raise both sides to a
//! common denominator and never round.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::system::{ExponentTuple, LinearFormSystemQ};
use crate::arith::padic::support;
use crate::arith::rational::{fmt_rational, pow_cmp, pow_i, to_f64};
use crate::arith::{BigReal, EvalContext, Place, Rational};
use crate::error::{Error, Result};

/// Q = base^exp with base > 0 and Q >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPower {
    base: Rational,
    exp: Rational,
}

impl QPower {
    pub fn new(base: Rational, exp: Rational) -> Result<QPower> {
        if !base.is_positive() {
            return Err(Error::invalid("Q needs a positive base"));
        }
        if pow_cmp(&base, &exp, &Rational::one(), &Rational::one())? == Ordering::Less {
            return Err(Error::invalid(format!("Q = {}^{} is below 1", fmt_rational(&base), fmt_rational(&exp))));
        }
        Ok(QPower { base, exp })
    }

    pub fn rational(q: Rational) -> Result<QPower> {
        QPower::new(q, Rational::one())
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn exp(&self) -> &Rational {
        &self.exp
    }

    pub fn ln_f64(&self) -> f64 {
        to_f64(&self.exp) * to_f64(&self.base).ln()
    }

    /// Enclosure of ln Q.
    pub fn ln(&self, prec: u32) -> Result<BigReal> {
        Ok(BigReal::from_rational(&self.base, prec).ln()?.mul(&BigReal::from_rational(&self.exp, prec)))
    }

    /// Q^e as an exact rational when it is one.
    pub fn pow_exact(&self, e: &Rational) -> Option<Rational> {
        rational_power(&self.base, &(&self.exp * e))
    }

    /// Ordering of a * Q^ea against b * Q^eb for a, b >= 0.
    pub fn cmp_scaled(&self, a: &Rational, ea: &Rational, b: &Rational, eb: &Rational) -> Result<Ordering> {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => return Ok(Ordering::Equal),
            (true, false) => return Ok(Ordering::Less),
            (false, true) => return Ok(Ordering::Greater),
            _ => {}
        }
        // a/b against Q^(eb - ea)
        pow_cmp(&(a / b), &Rational::one(), &self.base, &(&self.exp * (eb - ea)))
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_one() {
            write!(f, "{}", fmt_rational(&self.base))
        } else {
            write!(f, "{}^({})", fmt_rational(&self.base), fmt_rational(&self.exp))
        }
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// base^e when the result is rational; exponents are kept modest.
pub fn rational_power(base: &Rational, e: &Rational) -> Option<Rational> {
    let k = e.denom().to_u32()?;
    let m = e.numer().to_i64().filter(|m| m.abs() <= 1 << 20)?;
    let root = if k == 1 {
        base.clone()
    } else {
        Rational::new(exact_root(base.numer(), k)?, exact_root(base.denom(), k)?)
    };
    Some(pow_i(&root, m))
}

/// coef * Q^q_exp with coef >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedValue {
    pub coef: Rational,
    pub q_exp: Rational,
    pub q: QPower,
}

impl TwistedValue {
    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn cmp_value(&self, o: &TwistedValue) -> Result<Ordering> {
        if self.q != o.q {
            return Err(Error::invalid("values use different Q"));
        }
        self.q.cmp_scaled(&self.coef, &self.q_exp, &o.coef, &o.q_exp)
    }

    /// Ordering against Q^e.
    pub fn cmp_q_pow(&self, e: &Rational) -> Result<Ordering> {
        self.q.cmp_scaled(&self.coef, &self.q_exp, &Rational::one(), e)
    }

    pub fn le_q_pow(&self, e: &Rational) -> Result<bool> {
        Ok(self.cmp_q_pow(e)? != Ordering::Greater)
    }

    /// Ordering against a non-negative rational.
    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        self.q.cmp_scaled(&self.coef, &self.q_exp, r, &Rational::zero())
    }

    pub fn mul(&self, o: &TwistedValue) -> TwistedValue {
        TwistedValue { coef: &self.coef * &o.coef, q_exp: &self.q_exp + &o.q_exp, q: self.q.clone() }
    }

    pub fn exact(&self) -> Option<Rational> {
        if self.coef.is_zero() {
            return Some(Rational::zero());
        }
        self.q.pow_exact(&self.q_exp).map(|p| &self.coef * p)
    }

    pub fn ln_f64(&self) -> f64 {
        to_f64(&self.coef).ln() + to_f64(&self.q_exp) * self.q.ln_f64()
    }

    pub fn to_f64(&self) -> f64 {
        match self.exact() {
            Some(r) => to_f64(&r),
            None => self.ln_f64().exp(),
        }
    }

    /// Certified enclosure at the working precision of ctx.
    pub fn to_real(&self, ctx: &EvalContext) -> Result<BigReal> {
        if let Some(r) = self.exact() {
            return Ok(BigReal::from_rational(&r, ctx.precision_bits));
        }
        ctx.eval("twisted height", |p| {
            let e = self.q.ln(p)?.mul(&BigReal::from_rational(&self.q_exp, p)).exp()?;
            Ok(e.mul(&BigReal::from_rational(&self.coef, p)))
        })
    }
}

impl fmt::Display for TwistedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(r) => write!(f, "{}", fmt_rational(&r)),
            None if self.coef.is_one() => write!(f, "Q^({})", fmt_rational(&self.q_exp)),
            None => write!(f, "{}*Q^({})", fmt_rational(&self.coef), fmt_rational(&self.q_exp)),
        }
    }
}

impl Serialize for TwistedValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("value", &self.to_string())?;
        m.serialize_entry("coef", &fmt_rational(&self.coef))?;
        m.serialize_entry("q_exp", &fmt_rational(&self.q_exp))?;
        m.serialize_entry("approx", &self.to_f64())?;
        m.end()
    }
}

/// Places where some factor of H_Q(x) can differ from 1.
pub fn relevant_places(x: &[Rational], sys: &LinearFormSystemQ, c: &ExponentTuple) -> Vec<Place> {
    let mut places: BTreeSet<Place> = BTreeSet::new();
    places.insert(Place::Inf);
    places.extend(sys.exceptions().keys().cloned());
    places.extend(c.values().keys().cloned());
    for xi in x.iter().filter(|xi| !xi.is_zero()) {
        places.extend(support(xi).into_iter().map(Place::P));
    }
    places.into_iter().collect()
}

/// Exact twisted height of a nonzero rational vector.
pub fn twisted_height(x: &[Rational], sys: &LinearFormSystemQ, c: &ExponentTuple, q: &QPower) -> Result<TwistedValue> {
    let n = sys.n();
    if x.len() != n || c.n() != n {
        return Err(Error::invalid(format!("dimension mismatch: system has n = {n}")));
    }
    if x.iter().all(|xi| xi.is_zero()) {
        return Err(Error::invalid("twisted height of the zero vector"));
    }
    let mut coef = Rational::one();
    let mut q_exp = Rational::zero();
    for v in relevant_places(x, sys, c) {
        let cs = c.at(&v);
        let mut best: Option<(Rational, Rational)> = None;
        for (form, ci) in sys.forms_at(&v).iter().zip(cs) {
            let a = v.abs(&form.eval(x));
            let e = -ci;
            let better = match &best {
                None => true,
                Some((ba, be)) => q.cmp_scaled(&a, &e, ba, be)? == Ordering::Greater,
            };
            if better {
                best = Some((a, e));
            }
        }
        let (a, e) = best.expect("n >= 2 forms per place");
        coef *= a;
        q_exp += e;
    }
    Ok(TwistedValue { coef, q_exp, q: q.clone() })
}

pub fn twisted_height_int(x: &[BigInt], sys: &LinearFormSystemQ, c: &ExponentTuple, q: &QPower) -> Result<TwistedValue> {
    let xr: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
    twisted_height(&xr, sys, c, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use std::collections::BTreeMap;

    fn half_split() -> ExponentTuple {
        let mut m = BTreeMap::new();
        m.insert(Place::Inf, vec![rat(1, 2), rat(-1, 2)]);
        ExponentTuple::new(2, m).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_forms_unit_height() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(16)).unwrap();
        let h = twisted_height(&v(&[1, 1]), &sys, &ExponentTuple::zero(2), &q).unwrap();
        assert_eq!(h.exact(), Some(int(1)));
    }

    #[test]
    fn split_exponents() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(16)).unwrap();
        let h = twisted_height(&v(&[1, 0]), &sys, &half_split(), &q).unwrap();
        assert_eq!(h.exact(), Some(rat(1, 4)));
        assert!(h.le_q_pow(&rat(-1, 2)).unwrap());
        assert_eq!(h.cmp_q_pow(&rat(-1, 2)).unwrap(), Ordering::Equal);
        let h2 = twisted_height(&v(&[0, 1]), &sys, &half_split(), &q).unwrap();
        assert_eq!(h2.exact(), Some(int(4)));
        assert_eq!(h.cmp_value(&h2).unwrap(), Ordering::Less);
    }

    #[test]
    fn scaling_invariance() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::new(int(10), rat(3, 2)).unwrap();
        let a = twisted_height(&v(&[3, 5]), &sys, &half_split(), &q).unwrap();
        let b = twisted_height(&v(&[-12, -20]), &sys, &half_split(), &q).unwrap();
        let c = twisted_height(&[rat(3, 7), rat(5, 7)], &sys, &half_split(), &q).unwrap();
        assert_eq!(a.cmp_value(&b).unwrap(), Ordering::Equal);
        assert_eq!(a.cmp_value(&c).unwrap(), Ordering::Equal);
    }

    #[test]
    fn enclosure_matches_f64() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(10)).unwrap();
        let h = twisted_height(&v(&[2, 3]), &sys, &half_split(), &q).unwrap();
        // max(2 * 10^-1/2, 3 * 10^1/2) = 3 sqrt(10)
        let r = h.to_real(&EvalContext::default()).unwrap();
        assert!(r.contains_f64(3.0 * 10f64.sqrt()) || (r.to_f64() - 3.0 * 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_and_small_q() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(2)).unwrap();
        assert!(twisted_height(&v(&[0, 0]), &sys, &ExponentTuple::zero(2), &q).is_err());
        assert!(QPower::rational(rat(1, 2)).is_err());
        assert_eq!(rational_power(&int(16), &rat(-1, 2)), Some(rat(1, 4)));
        assert_eq!(rational_power(&int(2), &rat(1, 2)), None);
    }
}
