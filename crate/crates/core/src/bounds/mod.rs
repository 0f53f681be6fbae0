//! Explicit bounds: subspace counts, thresholds, the reduction to
//! twisted heights and the constants of the two-dimensional proof.
//!
//! Every "log" is natural unless the evaluator is switched to base 2.

pub mod two_dim;
pub mod format;
pub mod named;
pub mod reduction;
pub mod contradiction;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::rational::pow_i;
use crate::arith::{BigReal, EvalContext, Rational};
use crate::error::{Error, Result};

pub use two_dim::{TwoDimConstants, T4Chain, T5Chain};
pub use named::{evaluate_named, BoundReport};
pub use reduction::{ridout_etuple, reduction, repetition_etuple, Reduction};
pub use contradiction::{eta_of_v, ContradictionParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

/// Evaluator for the bound formulas.
#[derive(Clone, Debug)]
pub struct Bounds {
    pub ctx: EvalContext,
    pub log_base: LogBase,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { ctx: EvalContext::default(), log_base: LogBase::Natural }
    }
}

pub(crate) fn real(q: &Rational, w: u32) -> BigReal {
    BigReal::from_rational(q, w)
}

pub(crate) fn realn(n: impl Into<BigInt>, w: u32) -> BigReal {
    BigReal::from_int(n, w)
}

pub(crate) fn check_delta(delta: &Rational) -> Result<()> {
    if !delta.is_positive() || *delta > Rational::one() {
        return Err(Error::invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

pub(crate) fn check_pos(name: &str, q: &Rational) -> Result<()> {
    if !q.is_positive() {
        return Err(Error::invalid(format!("{name} must be positive, got {q}")));
    }
    Ok(())
}

/// The result must be certifiably positive; otherwise the parameters sit
/// outside the range where the double logarithm makes sense.
fn positive(x: BigReal, what: &str) -> Result<BigReal> {
    if x.is_positive() {
        Ok(x)
    } else if !x.hi().is_positive() {
        Err(Error::invalid(format!("{what} is not positive for these parameters (inner logarithm <= 1)")))
    } else {
        Err(Error::cert(format!("{what}: sign not yet decided")))
    }
}

impl Bounds {
    pub fn new(ctx: EvalContext) -> Bounds {
        Bounds { ctx, log_base: LogBase::Natural }
    }

    pub fn with_log_base(mut self, b: LogBase) -> Bounds {
        self.log_base = b;
        self
    }

    pub(crate) fn lg(&self, x: &BigReal) -> Result<BigReal> {
        let l = x.ln()?;
        match self.log_base {
            LogBase::Natural => Ok(l),
            LogBase::Two => l.div(&BigReal::ln2(x.prec())),
        }
    }

    pub(crate) fn eval<F>(&self, what: &str, f: F) -> Result<BigReal>
    where
        F: Fn(u32) -> Result<BigReal>,
    {
        self.ctx.eval(what, |w| f(w).and_then(|x| positive(x, what)))
    }

    /// t1(n, r, delta): number of exceptional subspaces in the parametric
    /// subspace theorem.
    pub fn t1(&self, n: u32, r: u64, delta: &Rational) -> Result<BigReal> {
        if n < 2 || r < n as u64 {
            return Err(Error::invalid(format!("t1 needs n >= 2 and r >= n, got n = {n}, r = {r}")));
        }
        check_delta(delta)?;
        if n == 2 {
            return self.t2(r, delta);
        }
        let e = (n as i64 + 8) * (n as i64 + 8);
        self.eval("t1", |w| {
            let l = self.lg(&realn(2 * r, w))?;
            let ll = self.lg(&l)?;
            let d = real(&pow_i(delta, -(n as i64) - 4), w);
            Ok(d.mul(&l).mul(&ll).mul_pow2(2 * e))
        })
    }

    /// t2(r, delta) = 2^25 delta^-3 log(2r) log(delta^-1 log(2r)).
    pub fn t2(&self, r: u64, delta: &Rational) -> Result<BigReal> {
        if r < 2 {
            return Err(Error::invalid(format!("r must be >= 2, got {r}")));
        }
        check_delta(delta)?;
        self.eval("t2", |w| {
            let l = self.lg(&realn(r * 2, w))?;
            let inner = self.lg(&l.mul(&real(&delta.recip(), w)))?;
            Ok(real(&pow_i(delta, -3), w).mul(&l).mul(&inner).mul_pow2(25))
        })
    }

    /// Subspace count of the quantitative subspace theorem for systems of
    /// inequalities in n variables.
    pub fn system_subspace_count(&self, n: u32, big_r: u64, big_d: u64, eps: &Rational) -> Result<BigReal> {
        if n < 2 || big_r < 1 || big_d < 1 {
            return Err(Error::invalid("system_subspace_count needs n >= 2, R >= 1, D >= 1"));
        }
        check_pos("epsilon", eps)?;
        let a = Rational::one() + eps.recip();
        self.eval("system_subspace_count", |w| {
            let l = self.lg(&realn(2 * big_r as u128 * big_d as u128, w))?;
            if n == 2 {
                let inner = self.lg(&real(&a, w).mul(&l))?;
                Ok(real(&pow_i(&a, 3), w).mul(&l).mul(&inner).mul_pow2(32))
            } else {
                let e = 3 * (n as i64 + 9) * (n as i64 + 9);
                let ll = self.lg(&l)?;
                Ok(real(&pow_i(&a, n as i64 + 4), w).mul(&l).mul(&ll).mul_pow2(e))
            }
        })
    }

    /// max(2H, n^(2n/eps)).
    pub fn system_threshold(&self, n: u32, h: &Rational, eps: &Rational) -> Result<BigReal> {
        if n < 2 || *h < Rational::one() {
            return Err(Error::invalid("system_threshold needs n >= 2 and H >= 1"));
        }
        check_pos("epsilon", eps)?;
        let ex = Rational::from_integer(BigInt::from(2 * n)) / eps;
        self.eval("system_threshold", |w| {
            let p = realn(n, w).pow(&real(&ex, w))?;
            Ok(real(h, w).mul_pow2(1).max(&p))
        })
    }

    /// 2^32 (1 + 1/eps)^3 log(6d) log((1 + 1/eps) log(6d)).
    pub fn ridout_subspace_count(&self, d: u64, eps: &Rational) -> Result<BigReal> {
        if d < 1 {
            return Err(Error::invalid("degree must be >= 1"));
        }
        check_pos("epsilon", eps)?;
        let a = Rational::one() + eps.recip();
        self.eval("ridout_subspace_count", |w| {
            let l = self.lg(&realn(6 * d, w))?;
            let inner = self.lg(&real(&a, w).mul(&l))?;
            Ok(real(&pow_i(&a, 3), w).mul(&l).mul(&inner).mul_pow2(32))
        })
    }

    /// max(2 H(xi), 2^(4/eps)) with H given as an enclosure.
    pub fn ridout_threshold(&self, h: &BigReal, eps: &Rational) -> Result<BigReal> {
        check_pos("epsilon", eps)?;
        if h.certainly_lt(&BigReal::one(h.prec())) {
            return Err(Error::invalid("height must be >= 1"));
        }
        let ex = Rational::from_integer(4.into()) / eps;
        let w = self.ctx.precision_bits.max(h.prec()) + 16;
        let p = realn(2, w).pow(&real(&ex, w))?;
        Ok(h.mul_pow2(1).max(&p))
    }

    /// B(d, eps) = 2^32 (1 + 2/eps)^3 log(6d) log((1 + 2/eps) log(6d)).
    pub fn ridout_count_half_eps(&self, d: u64, eps: &Rational) -> Result<BigReal> {
        if d < 1 {
            return Err(Error::invalid("degree must be >= 1"));
        }
        check_pos("epsilon", eps)?;
        let a = Rational::one() + Rational::from_integer(2.into()) / eps;
        self.eval("B", |w| {
            let l = self.lg(&realn(6 * d, w))?;
            let inner = self.lg(&real(&a, w).mul(&l))?;
            Ok(real(&pow_i(&a, 3), w).mul(&l).mul(&inner).mul_pow2(32))
        })
    }

    /// Explicit sufficient constant for the count of large run-length
    /// ratios: 18 * 2^32 log(6d) eps^-3 log(eps^-1 log(6d)). It dominates
    /// ridout_subspace_count(d, eps) on 0 < eps <= 1 (not the optimal constant).
    pub fn large_ratio_count(&self, d: u64, eps: &Rational) -> Result<BigReal> {
        if d < 1 {
            return Err(Error::invalid("degree must be >= 1"));
        }
        check_pos("epsilon", eps)?;
        if *eps > Rational::one() {
            return Err(Error::invalid("epsilon must be <= 1"));
        }
        self.eval("large_ratio_count", |w| {
            let l = self.lg(&realn(6 * d, w))?;
            let inner = self.lg(&l.mul(&real(&eps.recip(), w)))?;
            Ok(real(&pow_i(eps, -3), w).mul(&l).mul(&inner).mul_int(18).mul_pow2(32))
        })
    }

    /// n^(n/2) H^r, the Hadamard bound for the determinant product.
    pub fn hadamard_bound(&self, n: u32, r: u32, h: &Rational) -> Result<BigReal> {
        if n < 1 || *h < Rational::one() {
            return Err(Error::invalid("hadamard_bound needs n >= 1 and H >= 1"));
        }
        self.eval("hadamard_bound", |w| {
            let nn = realn(BigInt::from(n).pow(n), w).sqrt()?;
            Ok(nn.mul(&real(&pow_i(h, r as i64), w)))
        })
    }

    /// Certified floor of a positive enclosure.
    pub(crate) fn floor_of(&self, what: &str, f: impl Fn(u32) -> Result<BigReal>) -> Result<BigInt> {
        self.ctx.decide(what, |w| {
            let x = f(w)?;
            let (a, b) = (x.lo().floor(), x.hi().floor());
            Ok(if a == b { Some(a) } else { None })
        })
    }
}

pub(crate) fn binom2(r: u64) -> u64 {
    r * (r - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::eval_context;
    use crate::arith::rational::{int, rat};

    fn b() -> Bounds {
        Bounds::new(eval_context(200).unwrap())
    }

    fn close(x: &BigReal, v: f64, rel: f64) -> bool {
        ((x.to_f64() - v) / v).abs() < rel
    }

    #[test]
    fn examples_f64_level() {
        let b = b();
        assert!(close(&b.t1(2, 3, &int(1)).unwrap(), 3.506e7, 1e-3));
        let t = b.t1(3, 4, &int(1)).unwrap();
        assert!(close(&t, 1.0759e73, 1e-3));
        assert!(b.t1(2, 3, &int(1)).unwrap().certainly_lt(&b.t1(2, 3, &rat(1, 2)).unwrap()));
        assert!(close(&b.system_threshold(2, &int(1), &int(2)).unwrap(), 4.0, 1e-12));
        assert!(close(&b.system_subspace_count(2, 3, 1, &int(1)).unwrap(), 7.86e10, 1e-3));
        assert!(close(&b.ridout_subspace_count(1, &int(1)).unwrap(), 7.86e10, 1e-3));
        let one = BigReal::one(200);
        assert!(close(&b.ridout_threshold(&one, &int(4)).unwrap(), 2.0, 1e-12));
        assert!(close(&b.ridout_count_half_eps(1, &int(2)).unwrap(), 7.86e10, 1e-3));
        assert!(close(&b.hadamard_bound(2, 3, &int(2)).unwrap(), 16.0, 1e-12));
    }

    #[test]
    fn domains() {
        let b = b();
        assert!(b.t1(1, 3, &int(1)).is_err());
        assert!(b.t1(3, 2, &int(1)).is_err());
        assert!(b.t1(2, 3, &int(2)).is_err());
        assert!(b.t1(2, 3, &int(0)).is_err());
        assert!(b.ridout_subspace_count(0, &int(1)).is_err());
        assert!(b.large_ratio_count(2, &int(2)).is_err());
        // n >= 3 needs log log(2RD) > 0
        assert!(b.system_subspace_count(3, 1, 1, &int(1)).is_err());
        assert!(b.system_subspace_count(3, 2, 1, &int(1)).is_ok());
    }

    #[test]
    fn base_two_switch() {
        let b2 = b().with_log_base(LogBase::Two);
        let v = b2.t2(3, &int(1)).unwrap().to_f64();
        let l = 6f64.log2();
        assert!(((v - 2f64.powi(25) * l * l.log2()) / v).abs() < 1e-12);
    }
}
