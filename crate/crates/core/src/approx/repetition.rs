//! Longest non-overlapping repetitions A = U V W V X in prefixes of a word.

use serde::Serialize;

use crate::error::{Error, Result};

/// Offsets of A(ell) = U V W V X: U = [0, r), the first V = [r, r + |V|),
/// the second V = [r + s, r + s + |V|), X = [r + s + |V|, ell).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub ell: usize,
    pub r: usize,
    pub v_len: usize,
    pub s: usize,
}

impl Factorization {
    pub fn degenerate(ell: usize) -> Factorization {
        Factorization { ell, r: 0, v_len: 0, s: 0 }
    }

    pub fn is_degenerate(&self) -> bool {
        self.v_len == 0
    }

    pub fn t(&self) -> usize {
        self.r + self.s
    }

    pub fn w_len(&self) -> usize {
        self.s - self.v_len
    }

    pub fn x_len(&self) -> usize {
        self.ell - self.r - self.s - self.v_len
    }

    /// U, V, W, X as slices of the prefix.
    pub fn parts<'a>(&self, w: &'a [u8]) -> (&'a [u8], &'a [u8], &'a [u8], &'a [u8]) {
        let (r, s, l) = (self.r, self.s, self.v_len);
        (&w[..r], &w[r..r + l], &w[r + l..r + s], &w[r + s + l..self.ell])
    }
}

fn better(l: usize, r: usize, s: usize, best: &Factorization) -> bool {
    (l, std::cmp::Reverse(r), std::cmp::Reverse(s)) > (best.v_len, std::cmp::Reverse(best.r), std::cmp::Reverse(best.s))
}

/// The best factorization of every prefix A(ell), ell = 1..=|w|; entry
/// ell - 1 belongs to A(ell). |V| is maximal, then r minimal, then s
/// minimal. For each shift s the length of the match run ending at the
/// newest position is kept, so the whole table costs O(|w|^2).
pub fn best_repetitions_all(w: &[u8]) -> Vec<Factorization> {
    let n = w.len();
    let mut run = vec![0usize; n + 1];
    let mut best = Factorization::degenerate(0);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut top = best.v_len;
        for s in 1..=j {
            run[s] = if w[j] == w[j - s] { run[s] + 1 } else { 0 };
            top = top.max(run[s].min(s));
        }
        // factorizations of length top whose second V ends at j
        let mut cand = if top == best.v_len { best } else { Factorization::degenerate(0) };
        if top > 0 {
            for s in 1..=j {
                if run[s].min(s) >= top {
                    let r = j + 1 - s - top;
                    if cand.v_len < top || better(top, r, s, &cand) {
                        cand = Factorization { ell: j + 1, r, v_len: top, s };
                    }
                }
            }
        }
        best = Factorization { ell: j + 1, ..cand };
        out.push(best);
    }
    out
}

/// Best factorization of the whole word.
pub fn best_repetition(w: &[u8]) -> Result<Factorization> {
    if w.len() < 2 {
        return Err(Error::invalid("best_repetition needs a prefix of length >= 2"));
    }
    Ok(*best_repetitions_all(w).last().expect("nonempty"))
}

/// Reference search from a full table of longest common extensions:
/// lce[i][k] = longest L with w[i..i+L] = w[k..k+L]. Pairs (r, r + s) are
/// visited with r, then s, increasing.
pub fn best_repetition_brute(w: &[u8]) -> Result<Factorization> {
    let n = w.len();
    if n < 2 {
        return Err(Error::invalid("best_repetition needs a prefix of length >= 2"));
    }
    let mut lce = vec![vec![0usize; n + 1]; n + 1];
    for i in (0..n).rev() {
        for k in (0..n).rev() {
            if w[i] == w[k] {
                lce[i][k] = lce[i + 1][k + 1] + 1;
            }
        }
    }
    let mut best = Factorization::degenerate(n);
    for r in 0..n {
        for s in 1..n - r {
            let l = lce[r][r + s].min(s);
            if l > best.v_len {
                best = Factorization { ell: n, r, v_len: l, s };
            }
        }
    }
    Ok(best)
}
