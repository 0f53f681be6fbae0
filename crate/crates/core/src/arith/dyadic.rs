//! Dyadic rationals m·2^e with directed rounding.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// floor or ceil of n / 2^k for k >= 0.
pub(crate) fn shr_round(n: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    let q = n >> k; // arithmetic shift: floor
    match dir {
        Round::Down => q,
        Round::Up => {
            if (&q << k) == *n {
                q
            } else {
                q + 1
            }
        }
    }
}

pub(crate) fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    pub fn pow2(e: i64) -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position just above the most significant bit: |x| < 2^top.
    pub fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Round to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        let b = self.mant.bits();
        if b <= bits as u64 {
            return self.clone();
        }
        let sh = b - bits as u64;
        Dyadic::new(shr_round(&self.mant, sh, dir), self.exp + sh as i64)
    }

    /// Round to a multiple of 2^e in the given direction.
    pub fn round_at(&self, e: i64, dir: Round) -> Dyadic {
        if self.exp >= e {
            return self.clone();
        }
        Dyadic::new(shr_round(&self.mant, (e - self.exp) as u64, dir), e)
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Exact sum. Only used when the exponent gap is moderate.
    pub fn add_exact(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Sum rounded to `bits` significant bits. A summand far below the
    /// rounding unit of the other is replaced by a one-sided bound.
    pub fn add(&self, o: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return o.round(bits, dir);
        }
        if o.is_zero() {
            return self.round(bits, dir);
        }
        let (big, small) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        let gap = big.top() - small.top();
        if gap > bits as i64 + 8 {
            let eps = Dyadic::pow2(big.top() - bits as i64 - 6);
            let adj = match (dir, small.is_positive()) {
                (Round::Down, true) | (Round::Up, false) => big.clone(),
                (Round::Down, false) => big.add_exact(&eps.neg()),
                (Round::Up, true) => big.add_exact(&eps),
            };
            return adj.round(bits, dir);
        }
        self.add_exact(o).round(bits, dir)
    }

    pub fn sub(&self, o: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        self.add(&o.neg(), bits, dir)
    }

    /// Quotient rounded to `bits` significant bits.
    pub fn div(&self, o: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // want a quotient with about bits+2 significant bits
        let k = bits as i64 + 2 + o.mant.bits() as i64 - self.mant.bits() as i64;
        let (n, d) = if k >= 0 {
            (&self.mant << k as u64, o.mant.clone())
        } else {
            (self.mant.clone(), &o.mant << (-k) as u64)
        };
        let q = div_round(&n, &d, dir);
        Dyadic::new(q, self.exp - o.exp - k).round(bits, dir)
    }

    /// Directed rounding of a rational to `bits` significant bits.
    pub fn from_rational(q: &Rational, bits: u32, dir: Round) -> Dyadic {
        if q.numer().is_zero() {
            return Dyadic::zero();
        }
        let k = bits as i64 + 2 + q.denom().bits() as i64 - q.numer().bits() as i64;
        let n = if k >= 0 { q.numer() << k as u64 } else { q.numer().clone() };
        let d = if k >= 0 { q.denom().clone() } else { q.denom() << (-k) as u64 };
        Dyadic::new(div_round(&n, &d, dir), -k).round(bits, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    /// Nearest f64 (saturating to ±inf / 0 outside range).
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits() as i64;
        let sh = (b - 60).max(0);
        let m = (&self.mant >> sh as u64).to_f64().unwrap();
        let e = self.exp + sh;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split to avoid intermediate overflow
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        Dyadic::new(BigInt::from(m) * sign, e)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Dyadic) -> Ordering {
        let (sa, sb) = (self.mant.sign(), o.mant.sign());
        if sa != sb || sa == Sign::NoSign {
            let r = |s: Sign| match s {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            };
            return r(sa).cmp(&r(sb));
        }
        // same nonzero sign: compare magnitudes by top bit first
        let (ta, tb) = (self.top(), o.top());
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(o.exp);
            let a = self.mant.abs() << (self.exp - e) as u64;
            let b = o.mant.abs() << (o.exp - e) as u64;
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
