//! Checks p(n) >= n + 1 on a finite prefix; a failure points at an
//! eventually periodic tail, which is reported with its period.

use serde::Serialize;

use super::complexity::complexity_profile_fast;
use super::FiniteWord;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseHedlundFailure {
    pub n: usize,
    pub p: u64,
    /// Smallest period of the longest periodic tail among periods <= p(n).
    pub period: usize,
    /// 0-based index where that periodic tail starts.
    pub preperiod: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseHedlundReport {
    pub prefix_len: usize,
    pub n_max: usize,
    pub values: Vec<u64>,
    pub failures: Vec<MorseHedlundFailure>,
}

impl MorseHedlundReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Start of the longest tail of w with period `per`.
fn periodic_tail_start(s: &[u8], per: usize) -> usize {
    if per >= s.len() {
        return 0;
    }
    let mut start = s.len() - per;
    while start > 0 && s[start - 1] == s[start - 1 + per] {
        start -= 1;
    }
    start
}

pub fn morse_hedlund_check(w: &FiniteWord, n_max: usize) -> Result<MorseHedlundReport> {
    if n_max == 0 || w.len() < 2 * n_max {
        return Err(Error::invalid(format!("need |w| >= 2 n_max, have |w| = {} and n_max = {n_max}", w.len())));
    }
    let prof = complexity_profile_fast(w, n_max)?;
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let p = prof.get(n);
        if p < n as u64 + 1 {
            let (mut best_per, mut best_start) = (1, usize::MAX);
            for per in 1..=(p as usize).max(1) {
                let st = periodic_tail_start(w.symbols(), per);
                if st < best_start {
                    best_start = st;
                    best_per = per;
                }
            }
            failures.push(MorseHedlundFailure { n, p, period: best_per, preperiod: best_start });
        }
    }
    Ok(MorseHedlundReport { prefix_len: w.len(), n_max, values: prof.values, failures })
}
