//! Suffix automaton over small alphabets.

pub struct SuffixAutomaton {
    len: Vec<u32>,
    link: Vec<i32>,
    next: Vec<Vec<(u8, u32)>>,
    last: u32,
}

impl SuffixAutomaton {
    pub fn build(word: &[u8]) -> SuffixAutomaton {
        let cap = 2 * word.len() + 1;
        let mut sa = SuffixAutomaton {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap),
            last: 0,
        };
        sa.len.push(0);
        sa.link.push(-1);
        sa.next.push(Vec::new());
        for &c in word {
            sa.extend(c);
        }
        sa
    }

    fn go(&self, v: usize, c: u8) -> Option<u32> {
        self.next[v].iter().find(|t| t.0 == c).map(|t| t.1)
    }

    fn set(&mut self, v: usize, c: u8, to: u32) {
        match self.next[v].iter_mut().find(|t| t.0 == c) {
            Some(t) => t.1 = to,
            None => self.next[v].push((c, to)),
        }
    }

    fn extend(&mut self, c: u8) {
        let cur = self.len.len() as u32;
        self.len.push(self.len[self.last as usize] + 1);
        self.link.push(0);
        self.next.push(Vec::new());
        let mut p = self.last as i32;
        while p >= 0 && self.go(p as usize, c).is_none() {
            self.set(p as usize, c, cur);
            p = self.link[p as usize];
        }
        if p >= 0 {
            let q = self.go(p as usize, c).unwrap();
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q as i32;
            } else {
                let clone = self.len.len() as u32;
                self.len.push(self.len[p as usize] + 1);
                self.link.push(self.link[q as usize]);
                self.next.push(self.next[q as usize].clone());
                while p >= 0 && self.go(p as usize, c) == Some(q) {
                    self.set(p as usize, c, clone);
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone as i32;
                self.link[cur as usize] = clone as i32;
            }
        }
        self.last = cur;
    }

    pub fn states(&self) -> usize {
        self.len.len()
    }

    /// counts[n-1] = number of distinct factors of length n, for n <= n_max.
    /// State v represents the factors with lengths in (len(link v), len v].
    pub fn factor_counts(&self, n_max: usize) -> Vec<u64> {
        let mut diff = vec![0i64; n_max + 2];
        for v in 1..self.states() {
            let lo = self.len[self.link[v] as usize] as usize + 1;
            let hi = self.len[v] as usize;
            if lo > n_max {
                continue;
            }
            diff[lo] += 1;
            diff[hi.min(n_max) + 1] -= 1;
        }
        let mut out = Vec::with_capacity(n_max);
        let mut acc = 0i64;
        for d in diff.iter().take(n_max + 1).skip(1) {
            acc += d;
            out.push(acc as u64);
        }
        out
    }
}
