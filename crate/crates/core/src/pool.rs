//! Symbol strings, pools of equal-length strings and the pool text format.
//!
//! Text format: a header line `M L q`, then one string per line with each
//! symbol written as a single base-36 character (`0-9`, then `a-z`). For
//! `q <= 10` the body is plain digits.

use std::fmt::Write as _;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A string over the alphabet `{0, .., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolString {
    symbols: Vec<u8>,
}

impl SymbolString {
    pub fn new(symbols: Vec<u8>, q: u32) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::domain("symbol string must be non-empty"));
        }
        check_symbols(&symbols, q)?;
        Ok(SymbolString { symbols })
    }

    /// Parse a digit string such as `"0101"`.
    pub fn parse(s: &str, q: u32) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|ch| decode_char(ch).ok_or_else(|| Error::Parse { line: 0, msg: format!("bad symbol {ch:?}") }))
            .collect::<Result<Vec<u8>>>()?;
        Self::new(symbols, q)
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.symbols
    }
}

impl Deref for SymbolString {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.symbols
    }
}

fn check_symbols(symbols: &[u8], q: u32) -> Result<()> {
    match symbols.iter().find(|&&s| s as u32 >= q) {
        Some(&s) => Err(Error::InvalidSymbol { symbol: s as u32, q }),
        None => Ok(()),
    }
}

/// An ordered collection of equal-length strings, stored contiguously.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pool {
    len: usize,
    q: u32,
    data: Vec<u8>,
}

impl Pool {
    pub fn from_flat(data: Vec<u8>, len: usize, q: u32) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain("string length must be positive"));
        }
        if !(2..=256).contains(&q) {
            return Err(Error::domain(format!("alphabet size must be in [2, 256], got {q}")));
        }
        if !data.len().is_multiple_of(len) {
            return Err(Error::LengthMismatch { left: data.len() % len, right: len });
        }
        check_symbols(&data, q)?;
        Ok(Pool { len, q, data })
    }

    pub fn from_strings<S: AsRef<[u8]>>(strings: &[S], q: u32) -> Result<Self> {
        let len = strings.first().map(|s| s.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(len * strings.len());
        for s in strings {
            let s = s.as_ref();
            if s.len() != len {
                return Err(Error::LengthMismatch { left: s.len(), right: len });
            }
            data.extend_from_slice(s);
        }
        Self::from_flat(data, len, q)
    }

    /// All-zero pool of `count` strings.
    pub fn zeros(count: usize, len: usize, q: u32) -> Self {
        Pool { len, q, data: vec![0; count * len] }
    }

    pub(crate) fn from_raw(data: Vec<u8>, len: usize, q: u32) -> Self {
        debug_assert!(len > 0 && data.len().is_multiple_of(len));
        Pool { len, q, data }
    }

    /// Number of strings.
    pub fn count(&self) -> usize {
        self.data.len() / self.len
    }

    /// String length `L`.
    pub fn string_len(&self) -> usize {
        self.len
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn get(&self, i: usize) -> &[u8] {
        &self.data[i * self.len..(i + 1) * self.len]
    }

    #[cfg(test)]
    pub(crate) fn get_mut(&mut self, i: usize) -> &mut [u8] {
        &mut self.data[i * self.len..(i + 1) * self.len]
    }

    pub fn strings(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.len)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.data
    }

    pub(crate) fn symbols_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    /// Strings in `order`, i.e. output string `k` is input string `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Pool {
        let mut data = Vec::with_capacity(order.len() * self.len);
        for &i in order {
            data.extend_from_slice(self.get(i));
        }
        Pool { len: self.len, q: self.q, data }
    }

    /// Sorted copy of the strings, for multiset comparisons.
    pub fn sorted_strings(&self) -> Vec<&[u8]> {
        let mut v: Vec<&[u8]> = self.strings().collect();
        v.sort_unstable();
        v
    }

    pub fn to_text(&self) -> Result<String> {
        if self.q > 36 {
            return Err(Error::domain(format!(
                "pool text format supports q <= 36, got {}",
                self.q
            )));
        }
        let mut out = String::with_capacity(self.data.len() + self.count() + 32);
        let _ = writeln!(out, "{} {} {}", self.count(), self.len, self.q);
        for s in self.strings() {
            out.extend(s.iter().map(|&b| encode_char(b)));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Pool> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse { line: 1, msg: format!("bad header field {s:?}: {e}") })
        };
        if fields.len() != 3 {
            return Err(Error::Parse { line: 1, msg: "header must be `M L q`".into() });
        }
        let (m, len, q) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
        if len == 0 || !(2..=36).contains(&q) {
            return Err(Error::Parse { line: 1, msg: format!("unsupported L = {len}, q = {q}") });
        }
        let mut data = Vec::with_capacity(m * len);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line.trim();
            if line.chars().count() != len {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {len} symbols, found {}", line.chars().count()),
                });
            }
            for ch in line.chars() {
                match decode_char(ch) {
                    Some(s) if (s as usize) < q => data.push(s),
                    _ => {
                        return Err(Error::Parse { line: idx + 1, msg: format!("bad symbol {ch:?}") })
                    }
                }
            }
            rows += 1;
        }
        if rows != m {
            return Err(Error::Parse { line: 1, msg: format!("header says {m} strings, found {rows}") });
        }
        Ok(Pool { len, q: q as u32, data })
    }
}

fn encode_char(s: u8) -> char {
    char::from_digit(s as u32, 36).expect("symbol below 36")
}

fn decode_char(ch: char) -> Option<u8> {
    ch.to_digit(36).map(|d| d as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_format_layout() {
        let pool = Pool::from_strings(&[vec![0, 1, 1], vec![1, 0, 0]], 2).unwrap();
        assert_eq!(pool.to_text().unwrap(), "2 3 2\n011\n100\n");
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(Pool::from_text("").is_err());
        assert!(Pool::from_text("2 3 2\n011\n").is_err());
        assert!(Pool::from_text("1 3 2\n012\n").is_err());
        assert!(Pool::from_text("1 3 2\n01\n").is_err());
        assert!(Pool::from_text("1 3\n011\n").is_err());
    }

    #[test]
    fn symbol_validation() {
        assert!(SymbolString::new(vec![0, 2], 2).is_err());
        assert!(SymbolString::new(vec![], 2).is_err());
        assert_eq!(&*SymbolString::parse("0101", 2).unwrap(), &[0, 1, 0, 1]);
        assert!(Pool::from_strings(&[vec![0, 1], vec![1]], 2).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(q in 2u32..=36, len in 1usize..20, m in 1usize..20, seed in any::<u64>()) {
            let mut state = seed;
            let data: Vec<u8> = (0..m * len).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % q as u64) as u8
            }).collect();
            let pool = Pool::from_flat(data, len, q).unwrap();
            let back = Pool::from_text(&pool.to_text().unwrap()).unwrap();
            prop_assert_eq!(back, pool);
        }
    }
}
