//! Decimal rendering of enclosures, including astronomically large ones.

use crate::arith::rational::fmt_rational;
use crate::arith::real::sci_string;
use crate::arith::BigReal;

/// Midpoint in scientific notation with `digits` significant digits. Values
/// beyond about 10^1000 are rendered from their logarithm.
pub fn sci(x: &BigReal, digits: usize) -> String {
    if x.mid().top().abs() < 3400 {
        return x.to_sci(digits);
    }
    if !x.is_positive() {
        return format!("{:e}", x.to_f64());
    }
    let w = x.prec().max(64) + 32;
    let ln10 = BigReal::from_int(10, w).ln().expect("ln 10");
    let l10 = x.clone().with_prec(w).ln().and_then(|l| l.div(&ln10));
    match l10 {
        Ok(l) => {
            let m = l.mid();
            let e = m.floor();
            let frac = m.to_rational() - crate::arith::Rational::from_integer(e.clone());
            let mant = 10f64.powf(crate::arith::rational::to_f64(&frac));
            format!("{:.*}e{}", digits.min(15).saturating_sub(1), mant, e)
        }
        Err(_) => format!("{:e}", x.to_f64()),
    }
}

/// Exact rationals render as `p/q`.
pub fn rat(q: &crate::arith::Rational) -> String {
    fmt_rational(q)
}

pub fn sci_rat(q: &crate::arith::Rational, digits: usize) -> String {
    sci_string(q, digits)
}
