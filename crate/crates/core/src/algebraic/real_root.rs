//! Real algebraic numbers: a primitive integer polynomial together with a
//! rational interval isolating one of its real roots.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{count_roots, is_squarefree, isolate_real_roots, sturm_sequence, Poly};
use crate::arith::dyadic::{div_round, Round};
use crate::arith::rational::{fmt_rational, parse_rational};
use crate::arith::{BigReal, Dyadic, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicReal {
    poly: Poly,
    lo: Rational,
    hi: Rational,
}

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

impl AlgebraicReal {
    /// Validates and normalises (primitive, positive leading coefficient).
    pub fn new(poly: Poly, lo: Rational, hi: Rational) -> Result<AlgebraicReal> {
        if poly.degree() < 1 {
            return Err(Error::invalid("minimal polynomial must have degree >= 1"));
        }
        let poly = poly.primitive();
        if lo >= hi {
            return Err(Error::invalid("isolating interval must satisfy lo < hi"));
        }
        if !is_squarefree(&poly) {
            return Err(Error::invalid(format!("polynomial {poly} is not squarefree")));
        }
        let (sl, sh) = (poly.sign_at(&lo), poly.sign_at(&hi));
        if sl == Sign::NoSign || sh == Sign::NoSign {
            return Err(Error::invalid("isolating interval endpoint is a root"));
        }
        if sl == sh {
            return Err(Error::invalid(format!("{poly} has no sign change on [{lo}, {hi}]")));
        }
        let n = count_roots(&sturm_sequence(&poly), &lo, &hi);
        if n != 1 {
            return Err(Error::invalid(format!("interval [{lo}, {hi}] contains {n} roots of {poly}")));
        }
        Ok(AlgebraicReal { poly, lo, hi })
    }

    pub fn from_rational(q: &Rational) -> AlgebraicReal {
        let poly = Poly::new(vec![-q.numer().clone(), q.denom().clone()]);
        let one = Rational::one();
        AlgebraicReal { poly, lo: q - &one, hi: q + one }
    }

    /// The k-th real root (0-based, increasing) of a squarefree polynomial.
    pub fn nth_real_root(poly: &Poly, k: usize) -> Result<AlgebraicReal> {
        let p = poly.primitive();
        if !is_squarefree(&p) {
            return Err(Error::invalid(format!("polynomial {p} is not squarefree")));
        }
        let roots = isolate_real_roots(&p);
        let (lo, hi) = roots
            .get(k)
            .cloned()
            .ok_or_else(|| Error::invalid(format!("{p} has only {} real roots", roots.len())))?;
        if lo == hi {
            if p.degree() == 1 {
                return Ok(AlgebraicReal::from_rational(&lo));
            }
            // widen the degenerate interval around a rational root
            let mut eps = Rational::one();
            loop {
                let (a, b) = (&lo - &eps, &lo + &eps);
                if let Ok(x) = AlgebraicReal::new(p.clone(), a, b) {
                    return Ok(x);
                }
                eps /= two();
            }
        }
        AlgebraicReal::new(p, lo, hi)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.degree() == 1 {
            let c = self.poly.coeffs();
            Some(Rational::new(-c[0].clone(), c[1].clone()))
        } else {
            None
        }
    }

    /// Exact comparison of the root with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if *q <= self.lo {
            return Ordering::Greater;
        }
        if *q >= self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at(q);
        if s == Sign::NoSign {
            Ordering::Equal
        } else if s == self.poly.sign_at(&self.lo) {
            // root lies in (q, hi)
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Sign of f at a dyadic point, compared to the sign at the lower endpoint.
    fn side(&self, x: &Dyadic, s_lo: Sign) -> Ordering {
        let s = self.poly.sign_at_dyadic(x);
        if s == Sign::NoSign {
            Ordering::Equal
        } else if s == s_lo {
            Ordering::Less // x is left of the root
        } else {
            Ordering::Greater
        }
    }

    /// Dyadic enclosure of width <= 2^-bits by bisection with Newton steps.
    pub fn refine(&self, bits: u32) -> (Dyadic, Dyadic) {
        if let Some(q) = self.as_rational() {
            let lo = Dyadic::new(crate::arith::rational::floor(&(&q * pow2r(bits as i64))), -(bits as i64));
            let hi = Dyadic::new(
                -crate::arith::rational::floor(&(-&q * pow2r(bits as i64))),
                -(bits as i64),
            );
            return (lo, hi);
        }
        let s_lo = self.poly.sign_at(&self.lo);
        let target = bits as i64 + 2;
        // first a dyadic bracket inside (lo, hi)
        let (mut a, mut b) = (self.lo.clone(), self.hi.clone());
        let mut k = 2 - log2_floor(&(&b - &a));
        let mut da = rational_to_dyadic(&a, k, Round::Up);
        let mut db = rational_to_dyadic(&b, k, Round::Down);
        loop {
            if da < db {
                match (self.side(&da, s_lo), self.side(&db, s_lo)) {
                    (Ordering::Equal, _) => return (da.clone(), da),
                    (_, Ordering::Equal) => return (db.clone(), db),
                    (Ordering::Less, Ordering::Greater) => break,
                    (Ordering::Greater, _) => {
                        b = da.to_rational();
                    }
                    (_, Ordering::Less) => {
                        a = db.to_rational();
                    }
                }
            }
            k += 2;
            da = rational_to_dyadic(&a, k, Round::Up);
            db = rational_to_dyadic(&b, k, Round::Down);
        }
        let (mut a, mut b) = (da, db);
        let d = self.poly.derivative();
        loop {
            let w = b.add_exact(&a.neg());
            let wk = -w.top(); // width < 2^-wk
            if wk > target {
                return (a, b);
            }
            let mid = a.add_exact(&b).mul_pow2(-1);
            // Newton step from mid, verified by a sign change around it
            let want = (2 * wk).min(target + 1).max(wk + 1);
            if let Some((na, nb)) = self.newton_try(&mid, &d, want, &a, &b, s_lo) {
                if na == nb {
                    return (na.clone(), nb);
                }
                a = na;
                b = nb;
                continue;
            }
            match self.side(&mid, s_lo) {
                Ordering::Equal => return (mid.clone(), mid),
                Ordering::Less => a = mid,
                Ordering::Greater => b = mid,
            }
        }
    }

    fn newton_try(&self, m: &Dyadic, d: &Poly, want: i64, a: &Dyadic, b: &Dyadic, s_lo: Sign) -> Option<(Dyadic, Dyadic)> {
        // with m = M 2^e: F = f(m), D = f'(m) scaled to integers
        let (mm, e) = (m.mant().clone(), m.exp());
        let k = (-e).max(0) as u64;
        let mi = if e >= 0 { m.floor() } else { mm };
        let deg = self.poly.degree();
        let cs = self.poly.coeffs();
        let dc = d.coeffs();
        let mut f = BigInt::zero();
        for i in (0..=deg).rev() {
            f = f * &mi + (&cs[i] << (k * (deg - i) as u64));
        }
        // 2^(k deg) f(m)
        let mut g = BigInt::zero();
        for i in (0..dc.len()).rev() {
            g = g * &mi + (&dc[i] << (k * (dc.len() - 1 - i) as u64));
        }
        // 2^(k (deg-1)) f'(m)
        if g.is_zero() {
            return None;
        }
        // x = m - f/f' = m - F / (2^k G); in units of 2^-want
        let want_u = want.max(0) as u64;
        let num = &f << want_u;
        let den = &g << k;
        let step = div_round(&num, &den, Round::Down);
        let x = Dyadic::new(mi.clone() << want_u, -(want_u as i64) - k as i64).add_exact(&Dyadic::new(-step, -(want_u as i64)));
        let x = x.round_at(-(want_u as i64), Round::Down);
        let delta = Dyadic::pow2(-(want_u as i64));
        let lo = x.add_exact(&delta.neg());
        let hi = x.add_exact(&delta);
        if lo <= *a || hi >= *b {
            return None;
        }
        match (self.side(&lo, s_lo), self.side(&hi, s_lo)) {
            (Ordering::Equal, _) => Some((lo.clone(), lo)),
            (_, Ordering::Equal) => Some((hi.clone(), hi)),
            (Ordering::Less, Ordering::Greater) => Some((lo, hi)),
            _ => None,
        }
    }

    /// Enclosure as a `BigReal` of absolute width <= 2^-bits.
    pub fn enclosure(&self, bits: u32) -> BigReal {
        let (lo, hi) = self.refine(bits);
        let prec = (bits as i64 + hi.top().max(lo.top()).max(1) + 8) as u32;
        BigReal::from_bounds(lo, hi, prec)
    }

    /// The number u*x + v.
    pub fn affine(&self, u: &Rational, v: &Rational) -> Result<AlgebraicReal> {
        if u.is_zero() {
            return Err(Error::invalid("affine map with zero slope"));
        }
        let poly = self.poly.affine_image(u, v);
        let (mut lo, mut hi) = (u * &self.lo + v, u * &self.hi + v);
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        AlgebraicReal::new(poly, lo, hi)
    }

    /// m * x for a nonzero integer m.
    pub fn scale_by(&self, m: &BigInt) -> Result<AlgebraicReal> {
        if m.is_zero() {
            return Err(Error::invalid("scale factor must be nonzero"));
        }
        self.affine(&Rational::from_integer(m.clone()), &Rational::zero())
    }

    /// Parses `[c0,c1,...] lo hi`.
    pub fn parse(s: &str) -> Result<AlgebraicReal> {
        let s = s.trim();
        let close = s.find(']').ok_or_else(|| Error::invalid("expected `[coefficients] lo hi`"))?;
        if !s.starts_with('[') {
            return Err(Error::invalid("expected `[coefficients] lo hi`"));
        }
        let coeffs = s[1..close]
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::invalid(format!("bad coefficient `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        let rest: Vec<&str> = s[close + 1..].split_whitespace().collect();
        if rest.len() != 2 {
            return Err(Error::invalid("expected two interval endpoints"));
        }
        AlgebraicReal::new(Poly::new(coeffs), parse_rational(rest[0])?, parse_rational(rest[1])?)
    }

    /// Rational roots of the minimal polynomial (a nonempty result for
    /// degree >= 2 proves reducibility).
    pub fn rational_roots(&self) -> Vec<Rational> {
        rational_roots(&self.poly)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(60).to_f64()
    }
}

/// All rational roots of a squarefree integer polynomial: for every real
/// root and every divisor q of the leading coefficient the candidates p/q
/// inside a narrow isolating interval are tested exactly.
pub fn rational_roots(f: &Poly) -> Vec<Rational> {
    let f = f.primitive();
    if f.degree() == 1 {
        let c = f.coeffs();
        return vec![Rational::new(-c[0].clone(), c[1].clone())];
    }
    let lead = f.lead().abs();
    let lead_u = lead.to_biguint().unwrap();
    let divisors = divisors(&lead_u);
    let mut out = Vec::new();
    let sqf = if is_squarefree(&f) { f.clone() } else { super::poly::gcd(&f, &f) };
    for (lo, hi) in isolate_real_roots(&sqf) {
        if lo == hi {
            out.push(lo);
            continue;
        }
        // shrink below 1/(2 lead) so at most one candidate per denominator
        let x = match AlgebraicReal::new(sqf.clone(), lo, hi) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let bits = lead.bits() as u32 + 2;
        let (a, b) = x.refine(bits);
        if a == b {
            out.push(a.to_rational());
            continue;
        }
        let (a, b) = (a.to_rational(), b.to_rational());
        for q in &divisors {
            let q = Rational::from_integer(BigInt::from(q.clone()));
            let p0 = crate::arith::rational::floor(&(&a * &q));
            let p1 = crate::arith::rational::floor(&(&b * &q)) + 1;
            let mut p = p0;
            while p <= p1 {
                let c = Rational::from_integer(p.clone()) / &q;
                if f.sign_at(&c) == Sign::NoSign && !out.contains(&c) {
                    out.push(c);
                }
                p += 1;
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: &num_bigint::BigUint) -> Vec<num_bigint::BigUint> {
    let mut ds = vec![num_bigint::BigUint::one()];
    for (p, e) in crate::arith::primes::factor(n) {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = num_bigint::BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

fn pow2r(k: i64) -> Rational {
    crate::arith::rational::pow_i(&two(), k)
}

/// floor(log2 |q|) for q != 0.
fn log2_floor(q: &Rational) -> i64 {
    let mut e = q.numer().abs().bits() as i64 - q.denom().bits() as i64;
    let a = q.abs();
    while pow2r(e) > a {
        e -= 1;
    }
    while pow2r(e + 1) <= a {
        e += 1;
    }
    e
}

fn rational_to_dyadic(q: &Rational, k: i64, dir: Round) -> Dyadic {
    let scaled = q * pow2r(k);
    let n = match dir {
        Round::Down => scaled.numer().div_floor(scaled.denom()),
        Round::Up => -((-scaled.numer()).div_floor(scaled.denom())),
    };
    Dyadic::new(n, -k)
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.poly, fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

/// sqrt(2) - 1 as the root of X^2 + 2X - 1 in (0, 1).
pub fn sqrt2_minus_1() -> AlgebraicReal {
    AlgebraicReal::new(Poly::from_i64(&[-1, 2, 1]), Rational::zero(), Rational::one()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn contains_int_root(lo: &Dyadic, hi: &Dyadic, bits: u32, n: u32, k: u32) -> bool {
        // floor(2^bits * k^(1/n)) via integer n-th root
        let big = BigInt::from(k) << (bits as u64 * n as u64);
        let r = big.nth_root(n);
        let r_lo = Dyadic::new(r.clone(), -(bits as i64));
        let r_hi = Dyadic::new(r + 1, -(bits as i64));
        *lo <= r_hi && r_lo <= *hi
    }

    #[test]
    fn refine_examples() {
        let half = AlgebraicReal::new(Poly::from_i64(&[-1, 2]), int(0), int(1)).unwrap();
        let (lo, hi) = half.refine(10);
        assert!(lo.to_rational() <= rat(1, 2) && rat(1, 2) <= hi.to_rational());
        let s2 = AlgebraicReal::parse("[-2,0,1] 1/1 3/2").unwrap();
        let (lo, hi) = s2.refine(30);
        assert!(hi.add_exact(&lo.neg()) <= Dyadic::pow2(-30));
        assert!(contains_int_root(&lo, &hi, 30, 2, 2));
        assert!(lo.to_f64() < 1.41421357 && hi.to_f64() > 1.41421356);
        let c2 = AlgebraicReal::new(Poly::from_i64(&[-2, 0, 0, 1]), int(1), int(2)).unwrap();
        let (lo, hi) = c2.refine(30);
        assert!(contains_int_root(&lo, &hi, 30, 3, 2));
        assert!(lo.to_f64() < 1.25992105 && hi.to_f64() > 1.25992104);
    }

    #[test]
    fn refine_deep_matches_integer_sqrt() {
        let s2 = AlgebraicReal::parse("[-2,0,1] 1 2").unwrap();
        for bits in [1u32, 7, 64, 500, 5000] {
            let (lo, hi) = s2.refine(bits);
            assert!(hi.add_exact(&lo.neg()) <= Dyadic::pow2(-(bits as i64)));
            assert!(contains_int_root(&lo, &hi, bits + 2, 2, 2));
        }
    }

    #[test]
    fn validation() {
        assert!(AlgebraicReal::parse("[-2,0,1] 0 1").is_err()); // no root
        assert!(AlgebraicReal::parse("[-2,0,1] -2 2").is_err()); // two roots
        assert!(AlgebraicReal::parse("[1,2,1] -2 0").is_err()); // not squarefree
        assert!(AlgebraicReal::parse("[-1,1] 0 1").is_err()); // endpoint is a root
        let x = AlgebraicReal::parse("[4,0,-2] 1 3/2").unwrap();
        assert_eq!(x.poly(), &Poly::from_i64(&[-2, 0, 1]));
        assert_eq!(x.to_string(), "[-2,0,1] 1 3/2");
    }

    #[test]
    fn scaling() {
        let s2 = AlgebraicReal::parse("[-2,0,1] 1 2").unwrap();
        assert_eq!(s2.scale_by(&BigInt::from(1)).unwrap().poly(), s2.poly());
        let t = s2.scale_by(&BigInt::from(3)).unwrap();
        assert_eq!(t.poly(), &Poly::from_i64(&[-18, 0, 1]));
        assert_eq!(t.cmp_rational(&int(4)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&int(5)), Ordering::Less);
        assert!(s2.scale_by(&BigInt::zero()).is_err());
        let m = s2.scale_by(&BigInt::from(-2)).unwrap();
        // -2 sqrt(2) = -2.8284...
        assert_eq!(m.cmp_rational(&rat(-28, 10)), Ordering::Less);
        assert_eq!(m.cmp_rational(&rat(-2828, 1000)), Ordering::Less);
        assert_eq!(m.cmp_rational(&rat(-2829, 1000)), Ordering::Greater);
    }

    #[test]
    fn rational_root_screen() {
        assert!(rational_roots(&Poly::from_i64(&[-2, 0, 1])).is_empty());
        assert_eq!(rational_roots(&Poly::from_i64(&[-3, 2])), vec![rat(3, 2)]);
        // (2X - 1)(X^2 - 3)
        let f = Poly::from_i64(&[-1, 2]).mul(&Poly::from_i64(&[-3, 0, 1]));
        assert_eq!(rational_roots(&f), vec![rat(1, 2)]);
        // (3X + 2)(X - 5)(X^2 + 1)
        let f = Poly::from_i64(&[2, 3]).mul(&Poly::from_i64(&[-5, 1])).mul(&Poly::from_i64(&[1, 0, 1]));
        assert_eq!(rational_roots(&f), vec![rat(-2, 3), int(5)]);
    }

    #[test]
    fn nth_root_selection() {
        let f = Poly::from_i64(&[-2, 0, 1]);
        let neg = AlgebraicReal::nth_real_root(&f, 0).unwrap();
        assert_eq!(neg.cmp_rational(&int(0)), Ordering::Less);
        assert!(AlgebraicReal::nth_real_root(&f, 2).is_err());
        let g = Poly::from_i64(&[0, -1, 0, 1]);
        let zero = AlgebraicReal::nth_real_root(&g, 1).unwrap();
        assert_eq!(zero.cmp_rational(&int(0)), Ordering::Equal);
    }
}
