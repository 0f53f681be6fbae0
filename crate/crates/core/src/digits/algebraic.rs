//! Certified b-ary digits of a real algebraic number in (0, 1).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebraic::AlgebraicReal;
use crate::arith::{EvalContext, Rational};
use crate::error::{Error, Result};
use crate::words::word::check_base;
use crate::words::FiniteWord;

/// The n base-b digits of the integer v (0 <= v < b^n), most significant first.
pub(crate) fn int_to_digits(v: &BigInt, base: u32, n: usize) -> Vec<u8> {
    let mut ds = if v.is_zero() { Vec::new() } else { v.magnitude().to_radix_be(base) };
    assert!(ds.len() <= n, "value does not fit in {n} digits");
    let mut out = vec![0u8; n - ds.len()];
    out.append(&mut ds);
    out
}

/// floor(b^n * x) for x in (0, 1), certified from isolating-interval
/// refinements. Each doubling of the refinement adds guard bits until both
/// ends of the enclosure give the same integer; `ctx.cap_bits` bounds the
/// number of guard bits.
pub fn scaled_floor(x: &AlgebraicReal, base: u32, n: usize, ctx: &EvalContext) -> Result<BigInt> {
    let bpow = num_traits::pow(BigInt::from(base), n);
    if let Some(q) = x.as_rational() {
        return Ok(crate::arith::rational::floor(&(q * Rational::from_integer(bpow))));
    }
    let nominal = (n as f64 * (base as f64).log2()).ceil() as u64;
    let mut guard: u64 = 16;
    loop {
        let bits = nominal + guard;
        let (lo, hi) = x.refine(bits as u32);
        let f = |d: &crate::arith::Dyadic| crate::arith::Dyadic::new(d.mant() * &bpow, d.exp()).floor();
        let (a, b) = (f(&lo), f(&hi));
        if a == b {
            return Ok(a);
        }
        if guard >= ctx.cap_bits as u64 {
            return Err(Error::PrecisionCap { cap: ctx.cap_bits, what: format!("certifying {n} digits of {x}") });
        }
        guard = (guard * 2).min(ctx.cap_bits as u64);
    }
}

pub fn check_unit_interval(x: &AlgebraicReal) -> Result<()> {
    if x.cmp_rational(&Rational::zero()) != Ordering::Greater || x.cmp_rational(&Rational::from_integer(1.into())) != Ordering::Less {
        return Err(Error::invalid(format!("{x} is not in the open interval (0, 1)")));
    }
    Ok(())
}

/// The first n canonical base-b digits of x in (0, 1).
pub fn digits_of_algebraic_ctx(x: &AlgebraicReal, base: u32, n: usize, ctx: &EvalContext) -> Result<FiniteWord> {
    check_base(base)?;
    if n == 0 {
        return Err(Error::invalid("digit count must be at least 1"));
    }
    check_unit_interval(x)?;
    let v = scaled_floor(x, base, n, ctx)?;
    debug_assert!(!v.is_negative());
    FiniteWord::new(int_to_digits(&v, base, n), base)
}

pub fn digits_of_algebraic(x: &AlgebraicReal, base: u32, n: usize) -> Result<FiniteWord> {
    digits_of_algebraic_ctx(x, base, n, &EvalContext::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::sqrt2_minus_1;
    use crate::arith::rational::rat;

    #[test]
    fn examples() {
        let half = AlgebraicReal::from_rational(&rat(1, 2));
        assert_eq!(digits_of_algebraic(&half, 2, 4).unwrap().symbols(), &[1, 0, 0, 0]);
        let x = sqrt2_minus_1();
        assert_eq!(digits_of_algebraic(&x, 10, 8).unwrap().symbols(), &[4, 1, 4, 2, 1, 3, 5, 6]);
        assert_eq!(digits_of_algebraic(&x, 2, 13).unwrap().symbols(), &[0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]);
        let two = AlgebraicReal::parse("[-2,0,1] 1 2").unwrap();
        assert!(digits_of_algebraic(&two, 10, 3).is_err());
        assert!(digits_of_algebraic(&AlgebraicReal::from_rational(&rat(1, 1)), 10, 3).is_err());
    }

    #[test]
    fn rational_digits_are_canonical() {
        let q = AlgebraicReal::from_rational(&rat(1, 4));
        assert_eq!(digits_of_algebraic(&q, 2, 5).unwrap().symbols(), &[0, 1, 0, 0, 0]);
        let third = AlgebraicReal::from_rational(&rat(1, 3));
        assert_eq!(digits_of_algebraic(&third, 10, 4).unwrap().symbols(), &[3, 3, 3, 3]);
    }
}
