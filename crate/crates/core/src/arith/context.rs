//! Precision control: evaluate a closure at increasing working precision
//! until its enclosure is narrow enough or a decision can be certified.

use super::real::BigReal;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 200;
pub const DEFAULT_CAP: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalContext {
    pub precision_bits: u32,
    /// Maximum number of guard bits added on top of `precision_bits`.
    pub cap_bits: u32,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { precision_bits: DEFAULT_PRECISION, cap_bits: DEFAULT_CAP }
    }
}

impl EvalContext {
    pub fn new(precision_bits: u32) -> Result<EvalContext> {
        if precision_bits < 32 {
            return Err(Error::invalid(format!("precision must be at least 32 bits, got {precision_bits}")));
        }
        Ok(EvalContext { precision_bits, cap_bits: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap_bits: u32) -> EvalContext {
        self.cap_bits = cap_bits;
        self
    }

    fn schedule(&self) -> impl Iterator<Item = u32> {
        let p = self.precision_bits;
        let cap = self.cap_bits.max(32);
        let mut guard = 32u32;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let g = guard.min(cap);
            done = g >= cap;
            guard = guard.saturating_mul(2);
            Some(p + g)
        })
    }

    /// Evaluates `f(working_bits)` until the result has relative width
    /// <= 2^-precision_bits. Uncertain intermediate steps (certification
    /// errors) are retried at higher precision.
    pub fn eval<F>(&self, what: &str, f: F) -> Result<BigReal>
    where
        F: Fn(u32) -> Result<BigReal>,
    {
        for w in self.schedule() {
            match f(w) {
                Ok(v) if v.rel_width_le(self.precision_bits) => return Ok(v.with_prec(self.precision_bits)),
                Ok(_) | Err(Error::Certification(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::PrecisionCap { cap: self.cap_bits, what: what.to_string() })
    }

    /// Evaluates `f(working_bits)` until it returns `Some`.
    pub fn decide<T, F>(&self, what: &str, f: F) -> Result<T>
    where
        F: Fn(u32) -> Result<Option<T>>,
    {
        for w in self.schedule() {
            match f(w) {
                Ok(Some(t)) => return Ok(t),
                Ok(None) | Err(Error::Certification(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::PrecisionCap { cap: self.cap_bits, what: what.to_string() })
    }

    pub fn ln2(&self) -> BigReal {
        BigReal::ln2(self.precision_bits + 8).with_prec(self.precision_bits)
    }
}

/// Convenience constructor used throughout the crate.
pub fn eval_context(precision_bits: u32) -> Result<EvalContext> {
    EvalContext::new(precision_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(eval_context(31).is_err());
        assert_eq!(eval_context(64).unwrap().precision_bits, 64);
        assert_eq!(EvalContext::default().precision_bits, 200);
    }

    #[test]
    fn ln2_at_64_bits() {
        let c = eval_context(64).unwrap();
        let l = c.ln2();
        assert!(l.rel_width_le(64));
        // 0.6931471805 < ln 2 < 0.6931471806
        assert!(l.lo().to_f64() > 0.693_147_180_5 && l.hi().to_f64() < 0.693_147_180_6);
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn eval_escalates() {
        let c = eval_context(100).unwrap();
        let v = c.eval("sqrt 2", |w| BigReal::from_int(2, w).sqrt()).unwrap();
        assert!(v.rel_width_le(100));
        let r: Result<BigReal> = c.with_cap(64).eval("never narrow", |w| {
            Ok(BigReal::from_bounds(super::super::dyadic::Dyadic::zero(), super::super::dyadic::Dyadic::from_int(1), w))
        });
        assert!(matches!(r, Err(Error::PrecisionCap { .. })));
    }
}
