//! Interval-backed reals: closed intervals with dyadic endpoints and
//! outward rounding, plus certified elementary functions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{div_round, shr_round, Dyadic, Round};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

fn bits_of(k: i64) -> u32 {
    64 - k.unsigned_abs().leading_zeros()
}

// ---------------------------------------------------------------------------
// fixed-point kernels: values are integers scaled by 2^w

/// atanh(num/den) for 0 <= num/den <= 1/2, rounded in `dir`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u64, dir: Round) -> BigInt {
    if num.is_zero() {
        return BigInt::zero();
    }
    let num2 = num * num;
    let den2 = den * den;
    let mut p = div_round(&(num << w), den, dir);
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        sum += div_round(&p, &BigInt::from(2 * i + 1), dir);
        p = div_round(&(&p * &num2), &den2, dir);
        i += 1;
        match dir {
            Round::Down if p.is_zero() => return sum,
            Round::Up if p <= BigInt::one() => {
                // tail <= z^(2i+1) / (1 - z^2)
                let tail = div_round(&(&p * &den2), &(&den2 - &num2), Round::Up);
                return sum + tail + 1;
            }
            _ => {}
        }
    }
}

thread_local! {
    static LN2: RefCell<Option<(u64, BigInt, BigInt)>> = const { RefCell::new(None) };
}

/// ln 2 = 2 atanh(1/3) scaled by 2^w, rounded in `dir`.
fn ln2_fixed(w: u64, dir: Round) -> BigInt {
    LN2.with(|c| {
        let mut c = c.borrow_mut();
        let stale = match &*c {
            Some((cw, _, _)) => *cw < w,
            None => true,
        };
        if stale {
            let cw = (w + 64).max(512);
            let lo = atanh_fixed(&BigInt::one(), &BigInt::from(3), cw, Round::Down) * 2;
            let hi = atanh_fixed(&BigInt::one(), &BigInt::from(3), cw, Round::Up) * 2;
            *c = Some((cw, lo, hi));
        }
        let (cw, lo, hi) = c.as_ref().unwrap();
        match dir {
            Round::Down => shr_round(lo, cw - w, Round::Down),
            Round::Up => shr_round(hi, cw - w, Round::Up),
        }
    })
}

/// ln of a positive dyadic, rounded to `bits` significant bits.
fn ln_point(d: &Dyadic, bits: u32, dir: Round) -> Dyadic {
    debug_assert!(d.is_positive());
    let m = d.mant();
    let j = m.bits() - 1;
    let k = j as i64 + d.exp();
    let pj = BigInt::one() << j;
    let num = m - &pj;
    let den = m + &pj;
    let w = bits as u64 + 24 + bits_of(k) as u64;
    let l2 = ln2_fixed(w, if k >= 0 { dir } else { dir.flip() });
    // f = m/2^j in [1,2): ln f = 2 atanh((f-1)/(f+1))
    let a = atanh_fixed(&num, &den, w, dir);
    let total = l2 * k + a * 2;
    Dyadic::new(total, -(w as i64)).round(bits, dir)
}

/// exp(y) for a fixed-point 0 <= y < 2 scaled by 2^w.
fn exp_small_fixed(y: &BigInt, w: u64, dir: Round) -> BigInt {
    const HALVINGS: u64 = 12;
    let s = BigInt::one() << w;
    let y = shr_round(y, HALVINGS, dir);
    let mut term = s.clone();
    let mut sum = s.clone();
    let mut i = 1u64;
    loop {
        term = div_round(&(&term * &y), &(&s * i), dir);
        sum += &term;
        i += 1;
        match dir {
            Round::Down if term.is_zero() => break,
            Round::Up if term <= BigInt::one() => {
                sum += &term * 2 + 1;
                break;
            }
            _ => {}
        }
    }
    for _ in 0..HALVINGS {
        sum = shr_round(&(&sum * &sum), w, dir);
    }
    sum
}

/// Largest |x| accepted by exp before reporting overflow.
const EXP_LIMIT: f64 = (1u64 << 40) as f64;

fn exp_point(d: &Dyadic, bits: u32, dir: Round) -> Result<Dyadic> {
    if d.is_zero() {
        return Ok(Dyadic::from_int(1));
    }
    let x = d.to_f64();
    if !(x.abs() < EXP_LIMIT) {
        return Err(Error::invalid(format!("exp argument {x:e} out of range")));
    }
    let k = (x / std::f64::consts::LN_2).floor() as i64 - 1;
    let w = bits as u64 + 40 + bits_of(k) as u64;
    // r = d - k ln2 rounded in dir; lies in roughly (0.69, 1.39)
    let dfix = if d.exp() >= -(w as i64) {
        d.mant() << (d.exp() + w as i64) as u64
    } else {
        shr_round(d.mant(), (-(w as i64) - d.exp()) as u64, dir)
    };
    let l2 = ln2_fixed(w, if k >= 0 { dir.flip() } else { dir });
    let mut r = dfix - l2 * k;
    if r.is_negative() {
        r = BigInt::zero();
    }
    let e = exp_small_fixed(&r, w, dir);
    Ok(Dyadic::new(e, k - w as i64).round(bits, dir))
}

/// n-th root of a non-negative dyadic.
fn root_point(d: &Dyadic, n: u32, bits: u32, dir: Round) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    let m = d.mant();
    let need = (n as u64) * (bits as u64 + 4);
    let mut sh = need.saturating_sub(m.bits()) as i64;
    let rem = (d.exp() - sh).rem_euclid(n as i64);
    sh += rem;
    let mm = m << sh as u64;
    let mut r = mm.nth_root(n);
    if dir == Round::Up && num_traits::pow(r.clone(), n as usize) != mm {
        r += 1;
    }
    Dyadic::new(r, (d.exp() - sh) / n as i64).round(bits, dir)
}

fn pow_point(d: &Dyadic, mut n: u32, bits: u32, dir: Round) -> Dyadic {
    debug_assert!(!d.is_negative());
    let mut base = d.clone();
    let mut acc = Dyadic::from_int(1);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&base).round(bits, dir);
        }
        n >>= 1;
        if n > 0 {
            base = base.mul(&base).round(bits, dir);
        }
    }
    acc
}

// ---------------------------------------------------------------------------

impl BigReal {
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> BigReal {
        assert!(lo <= hi, "interval endpoints out of order");
        BigReal { lo, hi, prec }
    }

    pub fn exact(d: Dyadic, prec: u32) -> BigReal {
        BigReal { lo: d.clone(), hi: d, prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> BigReal {
        BigReal::exact(Dyadic::from_int(n), prec)
    }

    pub fn one(prec: u32) -> BigReal {
        BigReal::from_int(1, prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> BigReal {
        BigReal {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> BigReal {
        self.prec = prec;
        self
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg())
    }

    /// Width relative to max(1, |x|) is at most 2^-bits.
    pub fn rel_width_le(&self, bits: u32) -> bool {
        let mag = if self.lo.abs() > self.hi.abs() { self.lo.abs() } else { self.hi.abs() };
        let scale = if mag.top() > 1 { mag.top() - 1 } else { 0 };
        self.width() <= Dyadic::pow2(scale - bits as i64)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&Dyadic::from_f64(x))
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified comparison, `None` when the enclosures overlap.
    pub fn cmp_certified(&self, o: &BigReal) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && o.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, o: &BigReal) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &BigReal) -> bool {
        self.hi <= o.lo
    }

    fn p2(&self, o: &BigReal) -> u32 {
        self.prec.min(o.prec)
    }

    pub fn add(&self, o: &BigReal) -> BigReal {
        let p = self.p2(o);
        BigReal { lo: self.lo.add(&o.lo, p, Round::Down), hi: self.hi.add(&o.hi, p, Round::Up), prec: p }
    }

    pub fn sub(&self, o: &BigReal) -> BigReal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BigReal {
        BigReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> BigReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if self.lo.abs() > self.hi { self.lo.abs() } else { self.hi.clone() };
            BigReal { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn mul(&self, o: &BigReal) -> BigReal {
        let p = self.p2(o);
        let c = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = c.iter().min().unwrap().round(p, Round::Down);
        let hi = c.iter().max().unwrap().round(p, Round::Up);
        BigReal { lo, hi, prec: p }
    }

    pub fn mul_int(&self, n: i64) -> BigReal {
        self.mul(&BigReal::from_int(n, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> BigReal {
        BigReal { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn div(&self, o: &BigReal) -> Result<BigReal> {
        if !o.lo.is_positive() && !o.hi.is_negative() {
            return Err(Error::cert("division by an interval containing zero"));
        }
        let p = self.p2(o);
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div(b, p, Round::Down)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.div(b, p, Round::Up)).max().unwrap();
        Ok(BigReal { lo, hi, prec: p })
    }

    pub fn recip(&self) -> Result<BigReal> {
        BigReal::one(self.prec).div(self)
    }

    pub fn powi(&self, n: u32) -> BigReal {
        let p = self.prec;
        if n == 0 {
            return BigReal::one(p);
        }
        if !self.lo.is_negative() {
            return BigReal { lo: pow_point(&self.lo, n, p, Round::Down), hi: pow_point(&self.hi, n, p, Round::Up), prec: p };
        }
        if !self.hi.is_positive() {
            let r = self.neg().powi(n);
            return if n % 2 == 0 { r } else { r.neg() };
        }
        if n % 2 == 1 {
            let lo = pow_point(&self.lo.neg(), n, p, Round::Up).neg();
            let hi = pow_point(&self.hi, n, p, Round::Up);
            BigReal { lo, hi, prec: p }
        } else {
            let a = self.abs();
            BigReal { lo: Dyadic::zero(), hi: pow_point(&a.hi, n, p, Round::Up), prec: p }
        }
    }

    /// Hull of two enclosures.
    pub fn hull(&self, o: &BigReal) -> BigReal {
        BigReal {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.p2(o),
        }
    }

    pub fn max(&self, o: &BigReal) -> BigReal {
        BigReal {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.p2(o),
        }
    }

    pub fn min(&self, o: &BigReal) -> BigReal {
        BigReal {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            prec: self.p2(o),
        }
    }

    fn domain_positive(&self, what: &str) -> Result<()> {
        if self.lo.is_positive() {
            Ok(())
        } else if !self.hi.is_positive() {
            Err(Error::invalid(format!("{what} of a non-positive number")))
        } else {
            Err(Error::cert(format!("{what}: cannot certify that the argument is positive")))
        }
    }

    pub fn ln(&self) -> Result<BigReal> {
        self.domain_positive("logarithm")?;
        let p = self.prec;
        Ok(BigReal { lo: ln_point(&self.lo, p, Round::Down), hi: ln_point(&self.hi, p, Round::Up), prec: p })
    }

    pub fn exp(&self) -> Result<BigReal> {
        let p = self.prec;
        Ok(BigReal { lo: exp_point(&self.lo, p, Round::Down)?, hi: exp_point(&self.hi, p, Round::Up)?, prec: p })
    }

    pub fn root(&self, n: u32) -> Result<BigReal> {
        assert!(n >= 1);
        if self.lo.is_negative() {
            return Err(if self.hi.is_negative() {
                Error::invalid("root of a negative number")
            } else {
                Error::cert("root: cannot certify that the argument is non-negative")
            });
        }
        let p = self.prec;
        Ok(BigReal { lo: root_point(&self.lo, n, p, Round::Down), hi: root_point(&self.hi, n, p, Round::Up), prec: p })
    }

    pub fn sqrt(&self) -> Result<BigReal> {
        self.root(2)
    }

    /// x^y = exp(y ln x) for x > 0.
    pub fn pow(&self, y: &BigReal) -> Result<BigReal> {
        self.ln()?.mul(y).exp()
    }

    pub fn ln2(prec: u32) -> BigReal {
        let w = prec as u64 + 8;
        BigReal {
            lo: Dyadic::new(ln2_fixed(w, Round::Down), -(w as i64)).round(prec, Round::Down),
            hi: Dyadic::new(ln2_fixed(w, Round::Up), -(w as i64)).round(prec, Round::Up),
            prec,
        }
    }

    pub fn e(prec: u32) -> BigReal {
        BigReal::one(prec).exp().expect("exp(1) is in range")
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        sci_string(&self.mid().to_rational(), digits)
    }
}

/// Scientific notation of a rational, truncated to `digits` significant digits.
pub fn sci_string(q: &Rational, digits: usize) -> String {
    use num_traits::Signed as _;
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // decimal exponent estimate from bit lengths, then correct
    let est = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e = est;
    let scaled = |e: i64| -> Rational { &a / super::rational::pow_i(&ten, e) };
    while scaled(e) >= ten {
        e += 1;
    }
    while scaled(e) < Rational::one() {
        e -= 1;
    }
    let m = scaled(e) * super::rational::pow_i(&ten, digits as i64 - 1);
    let ds = super::rational::floor(&m).to_string();
    let (h, t) = ds.split_at(1);
    let t = t.trim_end_matches('0');
    let body = if t.is_empty() { h.to_string() } else { format!("{h}.{t}") };
    let sign = if neg { "-" } else { "" };
    if (-4..6).contains(&e) && digits > e.max(0) as usize {
        // plain notation for moderate magnitudes
        let v = scaled(0);
        let frac = digits as i64 - 1 - e;
        let f = if frac > 0 { frac as usize } else { 0 };
        let s = super::rational::floor(&(v * super::rational::pow_i(&ten, f as i64))).to_string();
        if f == 0 {
            return format!("{sign}{s}");
        }
        let s = format!("{:0>width$}", s, width = f + 1);
        let (ip, fp) = s.split_at(s.len() - f);
        let fp = fp.trim_end_matches('0');
        return if fp.is_empty() { format!("{sign}{ip}") } else { format!("{sign}{ip}.{fp}") };
    }
    format!("{sign}{body}e{e}")
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // show digits that the enclosure supports, at most 30
        let w = self.width();
        let mag = self.lo.abs().max(self.hi.abs());
        let digits = if w.is_zero() {
            30
        } else {
            let rel_bits = (mag.top() - w.top()).max(1) as f64;
            ((rel_bits * std::f64::consts::LOG10_2) as usize).clamp(1, 30)
        };
        write!(f, "{}", self.to_sci(digits))
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        BigReal::add(self, o)
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        BigReal::sub(self, o)
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        BigReal::mul(self, o)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::neg(self)
    }
}
