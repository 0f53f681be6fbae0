//! Digit changes and run boundaries.

use std::fmt::Write;

use super::FiniteWord;
use crate::error::{Error, Result};

/// Card{1 <= k <= n : a_k != a_(k+1)}; needs |w| >= n + 1.
pub fn nbdc(w: &FiniteWord, n: usize) -> Result<u64> {
    if w.len() < n + 1 {
        return Err(Error::invalid(format!("nbdc({n}) needs {} digits, have {}", n + 1, w.len())));
    }
    let s = w.symbols();
    Ok((0..n).filter(|&i| s[i] != s[i + 1]).count() as u64)
}

/// nbdc(n) for n = 1..=n_max, computed in one pass.
pub fn nbdc_profile(w: &FiniteWord, n_max: usize) -> Result<Vec<u64>> {
    if w.len() < n_max + 1 {
        return Err(Error::invalid(format!("nbdc({n_max}) needs {} digits, have {}", n_max + 1, w.len())));
    }
    let s = w.symbols();
    let mut out = Vec::with_capacity(n_max);
    let mut acc = 0;
    for i in 0..n_max {
        if s[i] != s[i + 1] {
            acc += 1;
        }
        out.push(acc);
    }
    Ok(out)
}

pub fn nbdc_csv(profile: &[u64]) -> String {
    let mut s = String::from("n,nbdc(n)\n");
    for (i, v) in profile.iter().enumerate() {
        writeln!(s, "{},{}", i + 1, v).unwrap();
    }
    s
}

/// The 1-based positions k with a_k != a_(k+1): ends of maximal constant
/// runs, excluding the last (unterminated) run.
pub fn run_boundaries(w: &FiniteWord) -> Vec<usize> {
    let s = w.symbols();
    (1..s.len()).filter(|&k| s[k - 1] != s[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        FiniteWord::parse(s, 2).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(nbdc(&w("00110"), 4).unwrap(), 2);
        assert_eq!(nbdc(&w("0000"), 3).unwrap(), 0);
        assert_eq!(nbdc(&w("010101"), 5).unwrap(), 5);
        assert!(nbdc(&w("0101"), 4).is_err());
        assert_eq!(run_boundaries(&w("1100010")), vec![2, 5, 6]);
        assert!(run_boundaries(&w("1111")).is_empty());
        assert_eq!(run_boundaries(&w("01010")), vec![1, 2, 3, 4]);
        assert_eq!(nbdc_profile(&w("00110"), 4).unwrap(), vec![0, 1, 1, 2]);
    }
}
