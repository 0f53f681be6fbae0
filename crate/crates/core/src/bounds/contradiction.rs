//! Parameters of the contradiction argument for block complexity:
//! eta(v), eps = (log t_N)^-v, k = [2/eps] + 1, the subspace count A1 and
//! the bound on k0.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{format::sci, real, realn, Bounds};
use crate::arith::rational::{int, rat};
use crate::arith::{BigReal, Rational};
use crate::error::{Error, Result};

/// Positive root of (11 + 2 eta)(v + eta) + eta = 1, i.e. of
/// 2 eta^2 + (12 + 2v) eta + (11v - 1) = 0, for 0 < v < 1/11.
pub fn eta_of_v(v: &Rational, w: u32) -> Result<BigReal> {
    if !v.is_positive() || *v >= rat(1, 11) {
        return Err(Error::invalid(format!("v must lie in (0, 1/11), got {v}")));
    }
    let b = int(12) + v * int(2);
    let c = v * int(11) - int(1);
    let disc = &b * &b - c * int(8);
    let s = real(&disc, w).sqrt()?;
    Ok(s.sub(&real(&b, w)).mul_pow2(-2))
}

#[derive(Clone, Debug, Serialize)]
pub struct ContradictionParams {
    pub log_t_n: String,
    pub v: String,
    pub d: u64,
    pub eta: String,
    pub eps: String,
    pub k: String,
    /// A1 with exponent +7 on (1 + (eps - 1/k)^-1), matching the n = 3
    /// subspace count.
    pub a1_plus7: String,
    /// A1 with exponent -7 on the same factor.
    pub a1_minus7: String,
    pub k_a1_plus7: String,
    pub k_a1_minus7: String,
    /// eps^-(8 + eta)
    pub eps_bound: String,
    pub check_plus7: bool,
    pub check_minus7: bool,
    /// 4 + log(4/eps)/log 2
    pub k0_bound: String,
}

impl Bounds {
    pub fn eta(&self, v: &Rational) -> Result<BigReal> {
        self.eval("eta", |w| eta_of_v(v, w))
    }

    /// eps = (log t_N)^-v given log t_N directly (t_N itself is usually
    /// far beyond any fixed exponent range).
    pub fn contradiction_eps(&self, log_t_n: &Rational, v: &Rational) -> Result<BigReal> {
        self.contradiction_check(log_t_n, v)?;
        self.eval("eps", |w| {
            let l = self.lg(&real(log_t_n, w))?;
            l.mul(&real(&-v, w)).exp()
        })
    }

    fn contradiction_check(&self, log_t_n: &Rational, v: &Rational) -> Result<()> {
        if !v.is_positive() || *v >= rat(1, 11) {
            return Err(Error::invalid(format!("v must lie in (0, 1/11), got {v}")));
        }
        // t_N >= 3 <=> log t_N >= ln 3
        let ln3 = BigReal::from_int(3, 64).ln()?;
        if BigReal::from_rational(log_t_n, 64).certainly_lt(&ln3) {
            return Err(Error::invalid("t_N must be >= 3"));
        }
        Ok(())
    }

    pub fn contradiction_params(&self, log_t_n: &Rational, v: &Rational, d: u64) -> Result<ContradictionParams> {
        if d < 1 {
            return Err(Error::invalid("degree must be >= 1"));
        }
        self.contradiction_check(log_t_n, v)?;
        let eta = self.eta(v)?;
        let eps = self.contradiction_eps(log_t_n, v)?;
        let k: BigInt = self.floor_of("k", |w| {
            let e = self.lg(&real(log_t_n, w))?.mul(&real(&-v, w)).exp()?;
            realn(2, w).div(&e)
        })? + 1;
        let kq = Rational::from_integer(k.clone());
        let a1 = |sign: i64| -> Result<BigReal> {
            self.eval("A1", |w| {
                let e = self.lg(&real(log_t_n, w))?.mul(&real(&-v, w)).exp()?;
                let e1 = e.sub(&real(&kq.recip(), w));
                let base = BigReal::one(w).add(&e1.recip()?);
                let pw = if sign > 0 { base.powi(7) } else { base.powi(7).recip()? };
                let l = self.lg(&realn(8 * d, w))?;
                let ll = self.lg(&l)?;
                Ok(pw.mul(&l).mul(&ll).mul_pow2(3 * 144))
            })
        };
        let ap = a1(1)?;
        let am = a1(-1)?;
        let kr = realn(k.clone(), self.ctx.precision_bits);
        let kap = kr.mul(&ap);
        let kam = kr.mul(&am);
        let bound = self.eval("eps bound", |w| {
            let e = self.lg(&real(log_t_n, w))?.mul(&real(&-v, w)).exp()?;
            let et = eta_of_v(v, w)?;
            e.ln()?.mul(&realn(8, w).add(&et)).neg().exp()
        })?;
        let decide = |x: &BigReal| x.cmp_certified(&bound).map(|o| o != std::cmp::Ordering::Greater);
        let k0 = self.eval("k0 bound", |w| {
            let e = self.lg(&real(log_t_n, w))?.mul(&real(&-v, w)).exp()?;
            let q = realn(4, w).div(&e)?.ln()?.div(&BigReal::ln2(w))?;
            Ok(q.add(&realn(4, w)))
        })?;
        Ok(ContradictionParams {
            log_t_n: crate::arith::rational::fmt_rational(log_t_n),
            v: crate::arith::rational::fmt_rational(v),
            d,
            eta: sci(&eta, 20),
            eps: sci(&eps, 20),
            k: k.to_string(),
            a1_plus7: sci(&ap, 15),
            a1_minus7: sci(&am, 15),
            k_a1_plus7: sci(&kap, 15),
            k_a1_minus7: sci(&kam, 15),
            eps_bound: sci(&bound, 15),
            check_plus7: decide(&kap).unwrap_or(false),
            check_minus7: decide(&kam).unwrap_or(false),
            k0_bound: sci(&k0, 15),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::eval_context;

    #[test]
    fn eta_root() {
        let e = eta_of_v(&rat(1, 20), 128).unwrap();
        let x = e.to_f64();
        assert!((x - 0.036964238850610743).abs() < 1e-15);
        // plug back into (11 + 2 eta)(v + eta) + eta = 1
        assert!(((11.0 + 2.0 * x) * (0.05 + x) + x - 1.0).abs() < 1e-14);
        assert!(eta_of_v(&rat(1, 11), 64).is_err());
    }

    #[test]
    fn params_example() {
        let b = Bounds::new(eval_context(128).unwrap());
        let p = b.contradiction_params(&int(1_000_000), &rat(1, 20), 2).unwrap();
        assert!(p.eps.starts_with("0.5011872336"), "{}", p.eps);
        // k = [2/eps] + 1 = [3.99..] + 1 = 4
        assert_eq!(p.k, "4");
        assert!(!p.check_plus7);
        assert!(b.contradiction_params(&int(1), &rat(1, 20), 2).is_err());
    }
}
