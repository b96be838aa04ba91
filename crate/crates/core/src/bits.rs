//! Bit strings with explicit length.
//!
//! Positions are 0-indexed from the left of the textual form, so `"0110"` has
//! bits 1 and 2 set. `value()` reads the string as a big-endian integer
//! (`"110"` is 6), which is the convention used everywhere a bit string
//! indexes a truth table.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![true; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// Big-endian decode: bit 0 of the string is the most significant bit of `value`.
    pub fn from_value(value: u64, width: usize) -> Self {
        assert!(width <= 64);
        let bits = (0..width).map(|i| (value >> (width - 1 - i)) & 1 == 1).collect();
        BitString(bits)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::input(format!("invalid bit character '{c}' in \"{s}\""))),
            }
        }
        Ok(BitString(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.0[i] = v;
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Bitwise negation.
    pub fn negated(&self) -> BitString {
        BitString(self.0.iter().map(|b| !b).collect())
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Big-endian integer value; requires `len() <= 64`.
    pub fn value(&self) -> u64 {
        assert!(self.0.len() <= 64, "bit string too wide for a u64 value");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Coordinatewise AND; both strings must have equal length.
    pub fn and(&self, other: &BitString) -> BitString {
        assert_eq!(self.len(), other.len());
        BitString(self.0.iter().zip(&other.0).map(|(&a, &b)| a & b).collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}
