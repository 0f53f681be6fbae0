use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_BASE: u32 = 256;

/// A finite word over the digit alphabet {0, ..., base-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteWord {
    symbols: Vec<u8>,
    base: u32,
}

pub fn check_base(base: u32) -> Result<()> {
    if !(2..=MAX_BASE).contains(&base) {
        return Err(Error::invalid(format!("base must be in 2..={MAX_BASE}, got {base}")));
    }
    Ok(())
}

impl FiniteWord {
    pub fn new(symbols: Vec<u8>, base: u32) -> Result<FiniteWord> {
        check_base(base)?;
        if let Some(&s) = symbols.iter().find(|&&s| s as u32 >= base) {
            return Err(Error::invalid(format!("symbol {s} out of range for base {base}")));
        }
        Ok(FiniteWord { symbols, base })
    }

    /// Parses a string of decimal digit characters (bases up to 10), or a
    /// comma separated list of symbols.
    pub fn parse(s: &str, base: u32) -> Result<FiniteWord> {
        let s = s.trim();
        let symbols = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| Error::invalid(format!("bad symbol `{t}`"))))
                .collect::<Result<Vec<u8>>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(36).map(|d| d as u8).ok_or_else(|| Error::invalid(format!("bad symbol `{c}`"))))
                .collect::<Result<Vec<u8>>>()?
        };
        FiniteWord::new(symbols, base)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord { symbols: self.symbols[..n.min(self.len())].to_vec(), base: self.base }
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
