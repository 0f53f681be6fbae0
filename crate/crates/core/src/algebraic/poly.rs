//! Dense univariate polynomials with integer coefficients, constant term first.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{BigReal, Dyadic, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Poly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn lead(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::new(vec![BigInt::zero()]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i).collect())
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of f(n / d) for d > 0, computed with integers only.
    pub fn sign_at_fraction(&self, n: &BigInt, d: &BigInt) -> Sign {
        // d^deg f(n/d) = sum c_i n^i d^(deg-i)
        let deg = self.degree();
        let mut total = BigInt::zero();
        let mut npow = BigInt::one();
        let mut dpows = vec![BigInt::one(); deg + 1];
        for i in 1..=deg {
            dpows[i] = &dpows[i - 1] * d;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                total += c * &npow * &dpows[deg - i];
            }
            npow *= n;
        }
        total.sign()
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        self.sign_at_fraction(x.numer(), x.denom())
    }

    /// Sign of f at a dyadic point.
    pub fn sign_at_dyadic(&self, x: &Dyadic) -> Sign {
        // homogenised Horner: f(m 2^e) with e<0 scaled by 2^(-e deg)
        let deg = self.degree();
        if x.exp() >= 0 {
            let v = x.floor();
            return self.eval_int(&v).sign();
        }
        let k = (-x.exp()) as u64;
        let m = x.mant();
        let mut acc = self.coeffs[deg].clone();
        for i in (0..deg).rev() {
            acc = acc * m + (&self.coeffs[i] << (k * (deg - i) as u64));
        }
        acc.sign()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &BigReal) -> BigReal {
        let p = x.prec();
        let mut acc = BigReal::from_int(BigInt::zero(), p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&BigReal::from_int(c.clone(), p));
        }
        acc
    }

    /// The polynomial f(X + c) for an integer c.
    pub fn taylor_shift(&self, c: &BigInt) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Poly::new(a)
    }

    /// Primitive polynomial whose roots are u*r + v for the roots r of f.
    pub fn affine_image(&self, u: &Rational, v: &Rational) -> Poly {
        assert!(!u.is_zero());
        // g(Y) = f((Y - v)/u): expand with rational arithmetic, clear denominators
        let deg = self.degree();
        let lin = [-v / u, u.recip()]; // (Y - v)/u = lin[0] + lin[1] Y
        let mut result = vec![Rational::zero(); deg + 1];
        let mut power = vec![Rational::one()];
        for c in &self.coeffs {
            let c = Rational::from_integer(c.clone());
            for (i, p) in power.iter().enumerate() {
                result[i] += &c * p;
            }
            let mut next = vec![Rational::zero(); power.len() + 1];
            for (i, p) in power.iter().enumerate() {
                next[i] += p * &lin[0];
                next[i + 1] += p * &lin[1];
            }
            power = next;
        }
        from_rational_coeffs(&result).primitive()
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Clear denominators of a rational coefficient vector.
pub fn from_rational_coeffs(cs: &[Rational]) -> Poly {
    let l = cs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    Poly::new(cs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect())
}

// ---------------------------------------------------------------------------
// rational-coefficient helpers for gcd and Sturm sequences

type QPoly = Vec<Rational>;

fn to_q(p: &Poly) -> QPoly {
    p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn q_is_zero(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !q_is_zero(&r) {
        let dr = r.len() - 1;
        let f = &r[dr] / &lb;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        trim(&mut r);
    }
    if r.is_empty() {
        r.push(Rational::zero());
    }
    r
}

fn q_to_primitive(p: &QPoly) -> Poly {
    from_rational_coeffs(p).primitive()
}

/// Primitive gcd of two integer polynomials.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = to_q(a);
    let mut y = to_q(b);
    trim(&mut y);
    while !q_is_zero(&y) {
        let r = q_rem(&x, &y);
        x = y;
        // keep coefficient growth in check
        y = if q_is_zero(&r) { r } else { to_q(&q_to_primitive(&r)) };
    }
    q_to_primitive(&x)
}

pub fn is_squarefree(f: &Poly) -> bool {
    gcd(f, &f.derivative()).degree() == 0
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(f: &Poly) -> Vec<Poly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].degree() == 0 {
            break;
        }
        let r = q_rem(&to_q(&seq[n - 2]), &to_q(&seq[n - 1]));
        if q_is_zero(&r) {
            break;
        }
        // -remainder, scaled by a positive constant
        let neg: QPoly = r.iter().map(|c| -c).collect();
        let l = neg.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ip = Poly::new(neg.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect());
        let g = ip.content().abs();
        seq.push(Poly::new(ip.coeffs.iter().map(|c| c / &g).collect()));
    }
    seq
}

fn variations(seq: &[Poly], x: &Rational) -> usize {
    let mut last = Sign::NoSign;
    let mut v = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots(seq: &[Poly], a: &Rational, b: &Rational) -> usize {
    variations(seq, a) - variations(seq, b)
}

/// Cauchy bound: every complex root has modulus < 1 + max|a_i / a_d|.
pub fn cauchy_bound(f: &Poly) -> Rational {
    let ld = Rational::from_integer(f.lead().abs());
    let m = f.coeffs[..f.degree()]
        .iter()
        .map(|c| Rational::from_integer(c.abs()) / &ld)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Disjoint rational intervals (a, b), endpoints not roots, each containing
/// exactly one real root of the squarefree polynomial f, in increasing order.
/// Rational roots are returned as degenerate intervals [r, r].
pub fn isolate_real_roots(f: &Poly) -> Vec<(Rational, Rational)> {
    let seq = sturm_sequence(f);
    let b = cauchy_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && f.sign_at(&hi) != Sign::NoSign && f.sign_at(&lo) != Sign::NoSign {
            out.push((lo, hi));
            continue;
        }
        if n == 1 && f.sign_at(&hi).is_zero() {
            out.push((hi.clone(), hi));
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        // (lo, mid] and (mid, hi]
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

trait SignExt {
    fn is_zero(&self) -> bool;
}

impl SignExt for Sign {
    fn is_zero(&self) -> bool {
        *self == Sign::NoSign
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", cs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn shifts_and_scaling() {
        let f = Poly::from_i64(&[-2, 0, 1]);
        // (X+1)^2 - 2 = X^2 + 2X - 1
        assert_eq!(f.taylor_shift(&BigInt::from(1)), Poly::from_i64(&[-1, 2, 1]));
        // roots 3*sqrt(2): X^2 - 18
        assert_eq!(f.affine_image(&int(3), &int(0)), Poly::from_i64(&[-18, 0, 1]));
        // sqrt(2) - 1
        assert_eq!(f.affine_image(&int(1), &int(-1)), Poly::from_i64(&[-1, 2, 1]));
        // 2X - 3 halved: roots 3/4 -> 4X - 3
        assert_eq!(Poly::from_i64(&[-3, 2]).affine_image(&rat(1, 2), &int(0)), Poly::from_i64(&[-3, 4]));
    }

    #[test]
    fn signs() {
        let f = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(f.sign_at(&rat(3, 2)), Sign::Plus);
        assert_eq!(f.sign_at(&rat(7, 5)), Sign::Minus);
        assert_eq!(f.sign_at_dyadic(&Dyadic::new(BigInt::from(3), -1)), Sign::Plus);
        assert_eq!(f.sign_at_dyadic(&Dyadic::new(BigInt::from(45), -5)), Sign::Minus);
        assert_eq!(f.sign_at_dyadic(&Dyadic::from_int(-2)), Sign::Plus);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = Poly::from_i64(&[-1, 0, 1]); // (X-1)(X+1)
        let b = Poly::from_i64(&[1, 2, 1]); // (X+1)^2
        assert_eq!(gcd(&a, &b), Poly::from_i64(&[1, 1]));
        assert!(is_squarefree(&a));
        assert!(!is_squarefree(&b));
    }

    #[test]
    fn root_isolation() {
        let f = Poly::from_i64(&[-1, -1, 0, 1]); // X^3 - X - 1, one real root
        let r = isolate_real_roots(&f);
        assert_eq!(r.len(), 1);
        let f = Poly::from_i64(&[0, -1, 0, 1]); // X^3 - X, roots -1, 0, 1
        let r = isolate_real_roots(&f);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|(a, b)| a <= b));
        let f = Poly::from_i64(&[-2, 0, 1]);
        let r = isolate_real_roots(&f);
        assert_eq!(r.len(), 2);
        assert!(r[1].0 < rat(142, 100) && r[1].1 > rat(141, 100));
    }
}
