//! Block complexity p(n): the number of distinct length-n factors.

use std::collections::HashSet;
use std::fmt::Write;

use serde::Serialize;

use super::automaton::SuffixAutomaton;
use super::FiniteWord;
use crate::error::{Error, Result};

/// Naive count of distinct windows of length n; 0 when n > |w|.
pub fn block_complexity(w: &FiniteWord, n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::invalid(format!("block length must be >= 1, got {n}")));
    }
    let n = n as usize;
    if n > w.len() {
        return Ok(0);
    }
    let set: HashSet<&[u8]> = w.symbols().windows(n).collect();
    Ok(set.len() as u64)
}

/// p(n) for n = 1..=n_max on a finite prefix. These are lower bounds for
/// the complexity of any infinite word with this prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub prefix_len: usize,
    /// values[n-1] = p(n)
    pub values: Vec<u64>,
}

impl ComplexityProfile {
    pub fn get(&self, n: usize) -> u64 {
        self.values[n - 1]
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// CSV rows `n,p(n)` with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,p(n)\n");
        for (i, v) in self.values.iter().enumerate() {
            writeln!(s, "{},{}", i + 1, v).unwrap();
        }
        s
    }
}

/// Suffix-automaton profile, linear in |w| for a fixed alphabet.
pub fn complexity_profile_fast(w: &FiniteWord, n_max: usize) -> Result<ComplexityProfile> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    let sa = SuffixAutomaton::build(w.symbols());
    Ok(ComplexityProfile { prefix_len: w.len(), values: sa.factor_counts(n_max) })
}

/// Same profile by direct enumeration (quadratic; used as an oracle).
pub fn complexity_profile_naive(w: &FiniteWord, n_max: usize) -> Result<ComplexityProfile> {
    let values = (1..=n_max as i64).map(|n| block_complexity(w, n)).collect::<Result<Vec<_>>>()?;
    Ok(ComplexityProfile { prefix_len: w.len(), values })
}

/// Refuses trend claims on prefixes shorter than n^2 unless overridden.
pub fn trend_guard(prefix_len: usize, n: usize, allow_short: bool) -> Result<()> {
    if !allow_short && (prefix_len as u128) < (n as u128) * (n as u128) {
        return Err(Error::invalid(format!(
            "prefix of length {prefix_len} is shorter than n^2 = {} (pass the override to proceed)",
            n * n
        )));
    }
    Ok(())
}
