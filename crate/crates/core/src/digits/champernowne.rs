use crate::error::{Error, Result};
use crate::words::word::check_base;
use crate::words::FiniteWord;

/// First n digits of the base-b concatenation 1, 2, 3, ... written in base b.
pub fn champernowne_digits(base: u32, n: usize) -> Result<FiniteWord> {
    check_base(base)?;
    if n == 0 {
        return Err(Error::invalid("digit count must be at least 1"));
    }
    let mut out = Vec::with_capacity(n);
    let mut k: u64 = 1;
    let mut buf = Vec::new();
    while out.len() < n {
        buf.clear();
        let mut v = k;
        while v > 0 {
            buf.push((v % base as u64) as u8);
            v /= base as u64;
        }
        out.extend(buf.iter().rev().take(n - out.len()));
        k += 1;
    }
    FiniteWord::new(out, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(champernowne_digits(10, 10).unwrap().symbols(), &[1, 2, 3, 4, 5, 6, 7, 8, 9, 1]);
        assert_eq!(champernowne_digits(2, 6).unwrap().symbols(), &[1, 1, 0, 1, 1, 1]);
        assert_eq!(champernowne_digits(10, 1).unwrap().symbols(), &[1]);
        let w = champernowne_digits(10, 20).unwrap();
        assert_eq!(w.to_string(), "12345678910111213141");
    }
}
