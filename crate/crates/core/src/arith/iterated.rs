//! Iterated exponentials and logarithms. log_m(x) is the m-fold natural
//! logarithm for x >= exp_m(1) and 1 below that point.

use super::real::BigReal;
use crate::error::{Error, Result};

pub fn iterated_exp(m: u32, x: &BigReal) -> Result<BigReal> {
    if m == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    let mut y = x.clone();
    for _ in 0..m {
        y = y.exp()?;
    }
    Ok(y)
}

/// Enclosure of log_m(x). The clamped composition
/// max(1, ln(max(1, ... ln(max(1, x))))) is monotone and agrees with log_m,
/// so evaluating it at both endpoints gives a valid enclosure even when x
/// straddles exp_m(1).
pub fn iterated_log(m: u32, x: &BigReal) -> Result<BigReal> {
    if m == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    let p = x.prec();
    let one = BigReal::one(p);
    let mut y = x.clone();
    for _ in 0..m {
        if y.certainly_le(&one) {
            return Ok(one);
        }
        y = y.max(&one).ln()?;
    }
    Ok(y.max(&one))
}
