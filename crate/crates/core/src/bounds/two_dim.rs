//! Constants of the two-dimensional parametric subspace theorem: the
//! number m of auxiliary points, log C, and the chains bounding t4, t5
//! and t2.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{binom2, check_delta, format::sci, real, realn, Bounds};
use crate::arith::rational::{int, pow_cmp};
use crate::arith::{BigReal, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct T4Chain {
    /// (m-1)(1 + log(162 m^2/delta)/log(1 + delta/2))
    pub sharp: String,
    /// 5 delta^-1 m log(162 m^2/delta)
    pub simplified: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct T5Chain {
    /// 1 + log(log C/log C')/log(1 + delta/2)
    pub sharp: String,
    /// 5 delta^-1 (m log(240 m^2/delta) + log(3m binom(r,2)) + log(12 binom(r,2)))
    pub middle: String,
    /// 6 delta^-1 m log(240 m^2/delta)
    pub simplified: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoDimConstants {
    pub r: u64,
    pub delta: String,
    pub script_h: String,
    pub m: String,
    pub log_c: String,
    pub t2: String,
    pub t3: Option<String>,
    pub t4: T4Chain,
    pub t5: T5Chain,
    /// 11 delta^-1 m log(240 m^2/delta) <= 33 delta^-1 m log m < t2
    pub t2_chain: Vec<String>,
    pub t2_chain_holds: bool,
}

impl Bounds {
    /// m = 1 + [25600 delta^-2 log(2r)], exact.
    pub fn aux_points_m(&self, r: u64, delta: &Rational) -> Result<BigInt> {
        if r < 2 {
            return Err(Error::invalid(format!("r must be >= 2, got {r}")));
        }
        check_delta(delta)?;
        let f = self.floor_of("m", |w| {
            let l = self.lg(&realn(2 * r, w))?;
            Ok(real(&(delta * delta).recip(), w).mul(&l).mul_int(25600))
        })?;
        Ok(f + 1)
    }

    /// log C for C = (36 H)^(m (240 m^2/delta)^m 3 binom(r,2)/delta),
    /// computed as a product of its factors.
    pub fn log_c(&self, r: u64, delta: &Rational, script_h: &Rational) -> Result<BigReal> {
        if *script_h < Rational::one() {
            return Err(Error::invalid("script H must be >= 1"));
        }
        let m = self.aux_points_m(r, delta)?;
        let mu: u32 = u32::try_from(&m).map_err(|_| Error::invalid("m too large"))?;
        let b = binom2(r);
        self.eval("log C", |w| {
            let base = real(&(Rational::from_integer(BigInt::from(240) * &m * &m) / delta), w);
            let pw = base.powi(mu);
            let f = real(&(Rational::from_integer(&m * BigInt::from(3 * b)) / delta), w);
            let l = self.lg(&real(&(script_h * int(36)), w))?;
            Ok(pw.mul(&f).mul(&l))
        })
    }

    /// log log C summed term by term (independent route to log C).
    pub fn log_log_c(&self, r: u64, delta: &Rational, script_h: &Rational) -> Result<BigReal> {
        let m = self.aux_points_m(r, delta)?;
        let b = binom2(r);
        if *script_h < Rational::one() {
            return Err(Error::invalid("script H must be >= 1"));
        }
        self.ctx.eval("log log C", |w| {
            let mr = realn(m.clone(), w);
            let a = self.lg(&mr)?;
            let bterm = mr.mul(&self.lg(&real(&(Rational::from_integer(BigInt::from(240) * &m * &m) / delta), w))?);
            let c = self.lg(&real(&(Rational::from_integer(BigInt::from(3 * b)) / delta), w))?;
            let d = self.lg(&self.lg(&real(&(script_h * int(36)), w))?)?;
            Ok(a.add(&bterm).add(&c).add(&d))
        })
    }

    /// t3(A, B, delta) = 1 + log(log B/log A)/log(1 + delta/2) for
    /// 4^(1/delta) < A < B.
    pub fn t3(&self, a: &Rational, b: &Rational, delta: &Rational) -> Result<BigReal> {
        super::check_pos("delta", delta)?;
        // A^delta > 4
        if !(a > &Rational::one() && pow_cmp(a, delta, &int(4), &int(1))? == std::cmp::Ordering::Greater) {
            return Err(Error::invalid("t3 needs A > 4^(1/delta)"));
        }
        if b <= a {
            return Err(Error::invalid("t3 needs A < B"));
        }
        self.eval("t3", |w| {
            let ratio = self.lg(&real(b, w))?.div(&self.lg(&real(a, w))?)?;
            let num = self.lg(&ratio)?;
            let den = self.lg(&real(&(Rational::one() + delta / int(2)), w))?;
            Ok(BigReal::one(w).add(&num.div(&den)?))
        })
    }

    fn m_real(&self, m: &BigInt, w: u32) -> BigReal {
        realn(m.clone(), w)
    }

    pub fn two_dim_constants(
        &self,
        r: u64,
        delta: &Rational,
        script_h: &Rational,
        t3_range: Option<(&Rational, &Rational)>,
    ) -> Result<TwoDimConstants> {
        let m = self.aux_points_m(r, delta)?;
        let log_c = self.log_c(r, delta, script_h)?;
        let t2 = self.t2(r, delta)?;
        let t3 = t3_range.map(|(a, b)| self.t3(a, b, delta)).transpose()?;
        let b2 = binom2(r);
        let p = self.ctx.precision_bits;
        let w = p + 32;
        let ln = |x: &BigReal| x.ln();
        let mr = self.m_real(&m, w);
        let dr = real(delta, w);
        let dinv = real(&delta.recip(), w);
        let half = ln(&real(&(Rational::one() + delta / int(2)), w))?;
        let m2d = |c: i64| real(&(Rational::from_integer(BigInt::from(c) * &m * &m) / delta), w);
        // t4 chain
        let l162 = ln(&m2d(162))?;
        let t4_sharp = mr.sub(&BigReal::one(w)).mul(&BigReal::one(w).add(&l162.div(&half)?));
        let t4_simple = dinv.mul(&mr).mul(&l162).mul_int(5);
        // t5 chain; log C' = max(log H / binom(r,2), log 4 / delta)
        let lh = ln(&real(script_h, w))?.div(&realn(b2, w))?;
        let l4 = ln(&realn(4, w))?.div(&dr)?;
        let log_cp = lh.max(&l4);
        let llc = self.log_log_c(r, delta, script_h)?;
        let t5_sharp = BigReal::one(w).add(&llc.sub(&ln(&log_cp)?).div(&half)?);
        let l240 = ln(&m2d(240))?;
        let t5_mid = dinv
            .mul(&mr.mul(&l240).add(&ln(&mr.mul_int(3 * b2 as i64))?).add(&ln(&realn(12 * b2, w))?))
            .mul_int(5);
        let t5_simple = dinv.mul(&mr).mul(&l240).mul_int(6);
        // t2 chain
        let c11 = dinv.mul(&mr).mul(&l240).mul_int(11);
        let c33 = dinv.mul(&mr).mul(&ln(&mr)?).mul_int(33);
        let t2n = self.t2(r, delta)?;
        let t4_holds = t4_sharp.certainly_le(&t4_simple);
        let t5_holds = t5_sharp.certainly_le(&t5_mid) && t5_mid.certainly_le(&t5_simple);
        let t2_holds = t4_simple.add(&t5_simple).certainly_le(&c11) && c11.certainly_le(&c33) && c33.certainly_lt(&t2n);
        Ok(TwoDimConstants {
            r,
            delta: crate::arith::rational::fmt_rational(delta),
            script_h: crate::arith::rational::fmt_rational(script_h),
            m: m.to_string(),
            log_c: sci(&log_c, 20),
            t2: sci(&t2, 20),
            t3: t3.map(|x| sci(&x, 20)),
            t4: T4Chain { sharp: sci(&t4_sharp, 12), simplified: sci(&t4_simple, 12), holds: t4_holds },
            t5: T5Chain {
                sharp: sci(&t5_sharp, 12),
                middle: sci(&t5_mid, 12),
                simplified: sci(&t5_simple, 12),
                holds: t5_holds,
            },
            t2_chain: vec![sci(&c11, 12), sci(&c33, 12), sci(&t2n, 12)],
            t2_chain_holds: t2_holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::eval_context;
    use crate::arith::rational::rat;

    fn b() -> Bounds {
        Bounds::new(eval_context(128).unwrap())
    }

    #[test]
    fn m_and_t3() {
        let b = b();
        // floor(25600 ln 4) = 35489
        assert_eq!(b.aux_points_m(2, &int(1)).unwrap(), BigInt::from(35490));
        let t3 = b.t3(&int(16), &int(256), &int(1)).unwrap().to_f64();
        assert!((t3 - (1.0 + 2f64.ln() / 1.5f64.ln())).abs() < 1e-12);
        assert!(b.t3(&int(4), &int(256), &int(1)).is_err());
        assert!(b.t3(&int(16), &int(16), &int(1)).is_err());
    }

    #[test]
    fn log_c_two_routes_agree() {
        let b = b();
        let delta = rat(1, 1);
        let lc = b.log_c(3, &delta, &int(2)).unwrap();
        let llc = b.log_log_c(3, &delta, &int(2)).unwrap();
        let diff = lc.ln().unwrap().sub(&llc);
        assert!(diff.abs().to_f64() < 1e-20);
    }

    #[test]
    fn chains_hold() {
        let b = b();
        let a = b.two_dim_constants(3, &rat(1, 2), &int(5), None).unwrap();
        assert!(a.t4.holds && a.t5.holds && a.t2_chain_holds, "{a:?}");
    }
}
