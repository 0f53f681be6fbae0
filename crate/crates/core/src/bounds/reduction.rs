//! Reduction of a system of inequalities to a twisted-height problem:
//! delta = eps/(n + eps) and c_iv = (1 + eps/n)^-1 (e_iv - (1/n) sum_j e_jv).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::primes::factor;
use crate::arith::rational::{fmt_rational, int};
use crate::arith::{Place, Rational};
use crate::error::{Error, Result};
use crate::twisted::ExponentTuple;

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rational,
    pub c: ExponentTuple,
    #[serde(serialize_with = "ser_rat")]
    pub max_sum: Rational,
}

fn ser_rat<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

/// Checks e_i,inf <= 1, e_ip <= 0 at primes and sum e = -eps, then returns
/// delta and the c-tuple (which satisfies the zero-sum and max-sum
/// conditions by construction; both are re-verified exactly).
pub fn reduction(n: usize, eps: &Rational, e: &ExponentTuple) -> Result<Reduction> {
    if n < 2 || e.n() != n {
        return Err(Error::invalid("dimension mismatch in reduction"));
    }
    if !eps.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    for (v, vals) in e.values() {
        for (i, x) in vals.iter().enumerate() {
            let ok = match v {
                Place::Inf => *x <= Rational::one(),
                Place::P(_) => !x.is_positive(),
            };
            if !ok {
                let bound = if *v == Place::Inf { "1" } else { "0" };
                return Err(Error::invalid(format!(
                    "condition e_iv <= {bound} fails at place {v}, i = {}: e = {}",
                    i + 1,
                    fmt_rational(x)
                )));
            }
        }
    }
    let total = e.total();
    if total != -eps.clone() {
        return Err(Error::invalid(format!(
            "condition sum e = -eps fails: sum is {}, -eps is {}",
            fmt_rational(&total),
            fmt_rational(&-eps.clone())
        )));
    }
    let nq = Rational::from_integer(n.into());
    let delta = eps / (&nq + eps);
    let scale = (Rational::one() + eps / &nq).recip();
    let mut c = BTreeMap::new();
    for (v, vals) in e.values() {
        let mean: Rational = vals.iter().sum::<Rational>() / &nq;
        c.insert(v.clone(), vals.iter().map(|x| (x - &mean) * &scale).collect());
    }
    let c = ExponentTuple::new(n, c).map_err(|err| Error::invalid(format!("reduced tuple invalid: {err}")))?;
    let max_sum = c.max_sum();
    Ok(Reduction { delta, c, max_sum })
}

/// e-tuple of the Ridout-type system: L_1 = X_1 - xi X_2, L_2 = X_2 at
/// infinity; e_1inf = 1 - f_inf, e_2inf = 1; (-f_p, 0) on S1; (0, -f_p) on
/// S2. Returns the tuple and eps = sum f_p - 2.
pub fn ridout_etuple(
    f: &BTreeMap<Place, Rational>,
    s1: &[BigUint],
    s2: &[BigUint],
) -> Result<(ExponentTuple, Rational)> {
    let finf = f.get(&Place::Inf).ok_or_else(|| Error::invalid("f_inf is required"))?;
    if f.values().any(|x| x.is_negative()) {
        return Err(Error::invalid("all f_p must be >= 0"));
    }
    if s1.iter().any(|p| s2.contains(p)) {
        return Err(Error::invalid("S1 and S2 must be disjoint"));
    }
    let expected: usize = 1 + s1.len() + s2.len();
    if f.len() != expected {
        return Err(Error::invalid("f must be given exactly on {inf} u S1 u S2"));
    }
    let eps = f.values().sum::<Rational>() - int(2);
    if !eps.is_positive() {
        return Err(Error::invalid("sum of f_p must exceed 2"));
    }
    let mut e = BTreeMap::new();
    e.insert(Place::Inf, vec![Rational::one() - finf, Rational::one()]);
    for (set, first) in [(s1, true), (s2, false)] {
        for p in set {
            let v = Place::P(p.clone());
            let fp = f.get(&v).ok_or_else(|| Error::invalid(format!("missing f_{p}")))?;
            let e_row = if first { vec![-fp.clone(), Rational::zero()] } else { vec![Rational::zero(), -fp.clone()] };
            e.insert(v, e_row);
        }
    }
    Ok((ExponentTuple::unchecked(2, e)?, eps))
}

/// e-tuple of the three-variable system for (b^t, b^r, p):
/// (1, (l+1)/k, -eps) at infinity and (lam, lam l/k, 0) at each p | b with
/// lam = log|b|_p / log b. lam is rational only for prime-power bases
/// (lam = -1), so other bases are rejected.
pub fn repetition_etuple(b: u64, l: u64, k: u64, eps: &Rational) -> Result<ExponentTuple> {
    if b < 2 || k == 0 || l >= k {
        return Err(Error::invalid("need b >= 2 and 0 <= l < k"));
    }
    let fac = factor(&BigUint::from(b));
    if fac.len() != 1 {
        return Err(Error::invalid(format!("base {b} is not a prime power; the p-adic exponents are irrational")));
    }
    let kq = Rational::from_integer(k.into());
    let lq = Rational::from_integer(l.into());
    let mut e = BTreeMap::new();
    e.insert(Place::Inf, vec![Rational::one(), (&lq + Rational::one()) / &kq, -eps.clone()]);
    e.insert(Place::P(fac[0].0.clone()), vec![int(-1), -(&lq / &kq), Rational::zero()]);
    ExponentTuple::unchecked(3, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn delta_and_ridout_tuple() {
        let mut f = BTreeMap::new();
        f.insert(Place::Inf, rat(5, 2));
        let (e, eps) = ridout_etuple(&f, &[], &[]).unwrap();
        assert_eq!(eps, rat(1, 2));
        let red = reduction(2, &eps, &e).unwrap();
        assert_eq!(red.delta, rat(1, 5));
        assert!(red.c.total().is_zero());
        assert!(red.max_sum <= Rational::one());
        let red1 = reduction(2, &int(1), &ExponentTuple::unchecked(2, {
            let mut m = BTreeMap::new();
            m.insert(Place::Inf, vec![int(0), int(-1)]);
            m
        }).unwrap())
        .unwrap();
        assert_eq!(red1.delta, rat(1, 3));
    }

    #[test]
    fn ridout_tuple_with_primes() {
        let mut f = BTreeMap::new();
        f.insert(Place::Inf, rat(1, 1));
        f.insert(Place::P(BigUint::from(2u32)), rat(3, 2));
        let (e, eps) = ridout_etuple(&f, &[], &[BigUint::from(2u32)]).unwrap();
        let red = reduction(2, &eps, &e).unwrap();
        assert!(red.c.total().is_zero());
    }

    #[test]
    fn repetition_tuple_sum() {
        let eps = rat(1, 2);
        let e = repetition_etuple(2, 1, 5, &eps).unwrap();
        assert_eq!(e.total(), -(eps.clone() - rat(1, 5)));
        let red = reduction(3, &(eps - rat(1, 5)), &e).unwrap();
        assert!(red.c.total().is_zero());
        assert!(repetition_etuple(6, 1, 5, &rat(1, 2)).is_err());
    }

    #[test]
    fn rejects_bad_tuples() {
        let mut m = BTreeMap::new();
        m.insert(Place::Inf, vec![int(2), int(-3)]);
        let e = ExponentTuple::unchecked(2, m).unwrap();
        let err = reduction(2, &int(1), &e).unwrap_err();
        assert!(err.to_string().contains("e_iv <= 1"));
        let mut m = BTreeMap::new();
        m.insert(Place::Inf, vec![int(0), int(-2)]);
        let e = ExponentTuple::unchecked(2, m).unwrap();
        assert!(reduction(2, &int(1), &e).unwrap_err().to_string().contains("sum e = -eps"));
    }
}
