use std::fmt;
use std::ops::Deref;

use crate::error::{invalid, Error, Result};

/// A finite one-sided prefix over a small integer alphabet.
///
/// Positions are 1-based in the public API ([`SymbolSequence::at`]); the
/// underlying slice (via `Deref`) is 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolSequence(Vec<i8>);

impl SymbolSequence {
    pub fn new(symbols: Vec<i8>) -> Self {
        SymbolSequence(symbols)
    }

    pub fn zeros(len: usize) -> Self {
        SymbolSequence(vec![0; len])
    }

    /// Parses a string of decimal digits, e.g. `"0100"`.
    pub fn from_digits(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as i8)
                    .ok_or_else(|| invalid(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolSequence)
    }

    /// The symbol at 1-based position `n`.
    pub fn at(&self, n: usize) -> Result<i8> {
        if n == 0 || n > self.0.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.0.len(),
            });
        }
        Ok(self.0[n - 1])
    }

    /// `pattern` repeated with its own length as period, truncated to `len`.
    pub fn periodic(pattern: &[i8], len: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(invalid("periodic pattern must be nonempty"));
        }
        Ok(SymbolSequence(
            pattern.iter().copied().cycle().take(len).collect(),
        ))
    }

    pub fn prefix(&self, len: usize) -> SymbolSequence {
        SymbolSequence(self.0[..len.min(self.0.len())].to_vec())
    }

    /// The distinct symbols in increasing order.
    pub fn alphabet(&self) -> Vec<i8> {
        let mut seen = [false; 256];
        for &s in &self.0 {
            seen[(s as i16 + 128) as usize] = true;
        }
        (0..256)
            .filter(|&i| seen[i])
            .map(|i| (i as i16 - 128) as i8)
            .collect()
    }

    pub fn abs(&self) -> SymbolSequence {
        SymbolSequence(self.0.iter().map(|s| s.abs()).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl Deref for SymbolSequence {
    type Target = [i8];

    fn deref(&self) -> &[i8] {
        &self.0
    }
}

impl From<Vec<i8>> for SymbolSequence {
    fn from(v: Vec<i8>) -> Self {
        SymbolSequence(v)
    }
}

impl FromIterator<i8> for SymbolSequence {
    fn from_iter<I: IntoIterator<Item = i8>>(iter: I) -> Self {
        SymbolSequence(iter.into_iter().collect())
    }
}

impl fmt::Display for SymbolSequence {
    /// Digits for nonnegative single-digit alphabets, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| (0..=9).contains(&s)) {
            for &s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_roundtrip() {
        let s = SymbolSequence::from_digits("0100").unwrap();
        assert_eq!(&*s, &[0, 1, 0, 0]);
        assert_eq!(s.to_string(), "0100");
        assert!(SymbolSequence::from_digits("01x").is_err());
    }

    #[test]
    fn one_based_access() {
        let s = SymbolSequence::new(vec![5, 6, 7]);
        assert_eq!(s.at(1).unwrap(), 5);
        assert_eq!(s.at(3).unwrap(), 7);
        assert!(s.at(0).is_err());
        assert!(s.at(4).is_err());
    }

    #[test]
    fn alphabet_is_sorted() {
        let s = SymbolSequence::new(vec![1, -1, 0, 1, -1]);
        assert_eq!(s.alphabet(), vec![-1, 0, 1]);
    }

    #[test]
    fn periodic_extension() {
        let s = SymbolSequence::periodic(&[1, 0, 2], 7).unwrap();
        assert_eq!(&*s, &[1, 0, 2, 1, 0, 2, 1]);
        assert!(SymbolSequence::periodic(&[], 3).is_err());
    }
}
