use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A finite binary string.
///
/// Ordering is length-lexicographic: shorter strings first, ties broken
/// lexicographically. Use [`BitString::cmp_lex`] for the plain
/// lexicographic (trie) order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .rev()
            .map(|i| i < 64 && (value >> i) & 1 == 1)
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn prefix(&self, n: usize) -> BitString {
        Self {
            bits: self.bits[..n.min(self.len())].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Neither string is a prefix of the other.
    pub fn is_incomparable(&self, other: &BitString) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    pub fn cmp_lex(&self, other: &BitString) -> Ordering {
        self.bits.cmp(&other.bits)
    }

    pub fn contains_substring(&self, pattern: &BitString) -> bool {
        if pattern.is_empty() {
            return true;
        }
        self.bits
            .windows(pattern.len())
            .any(|w| w == pattern.bits())
    }

    /// Next string of the same length in lexicographic order, if any.
    pub fn successor(&self) -> Option<BitString> {
        let last_zero = self.bits.iter().rposition(|b| !b)?;
        let mut bits = self.bits.clone();
        bits[last_zero] = true;
        for b in &mut bits[last_zero + 1..] {
            *b = false;
        }
        Some(Self { bits })
    }

    /// Index of this string in the length-lexicographic enumeration of all
    /// binary strings; the empty string has index 0.
    pub fn lenlex_index(&self) -> u64 {
        assert!(self.len() < 64, "lenlex index overflows u64");
        let mut value: u64 = 1;
        for &b in &self.bits {
            value = (value << 1) | u64::from(b);
        }
        value - 1
    }

    /// The string with length-lexicographic index `n`.
    pub fn from_lenlex(n: u64) -> BitString {
        let value = n + 1;
        let width = 63 - value.leading_zeros() as usize;
        Self::from_u64(value, width)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "ε");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.to_text())
    }
}

impl BitString {
    /// Plain "0"/"1" text; the empty string renders as "".
    pub fn to_text(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(BitString::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

/// Shorthand used throughout the tests: `bs("0101")`.
pub fn bs(text: &str) -> BitString {
    text.parse().expect("bit literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lenlex_first_entries() {
        let first: Vec<String> = (0..7)
            .map(|n| BitString::from_lenlex(n).to_text())
            .collect();
        assert_eq!(first, ["", "0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn lenlex_three_is_00_by_sorting() {
        // oracle: sort every string of length <= 2 by (length, lex)
        let mut all = vec![BitString::new()];
        for len in 1..=2usize {
            for v in 0..(1u64 << len) {
                all.push(BitString::from_u64(v, len));
            }
        }
        all.sort();
        assert_eq!(all[3], bs("00"));
        assert_eq!(BitString::from_lenlex(3), bs("00"));
    }

    #[test]
    fn successor_saturates() {
        assert_eq!(bs("0011").successor(), Some(bs("0100")));
        assert_eq!(bs("111").successor(), None);
        assert_eq!(BitString::new().successor(), None);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("012".parse::<BitString>().is_err());
        assert_eq!("".parse::<BitString>().unwrap(), BitString::new());
    }

    #[test]
    fn serde_is_plain_text() {
        let s = serde_json::to_string(&bs("0110")).unwrap();
        assert_eq!(s, "\"0110\"");
        let back: BitString = serde_json::from_str(&s).unwrap();
        assert_eq!(back, bs("0110"));
    }
}
