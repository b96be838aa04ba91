//! Symmetric outer functions.
//!
//! A symmetric boolean function on `n` bits is stored as its spectrum table
//! `D` of `n+1` bits with `f(x) = D(|x|)`. The derived change-point distances
//! `l0` and `l1` are recomputed from the table on construction.

use crate::analysis::compute_l0_l1;
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricSpec {
    n: usize,
    table: Vec<bool>,
    l0: usize,
    l1: usize,
}

impl SymmetricSpec {
    /// Build from a spectrum table of `n+1` entries.
    pub fn from_table(table: Vec<bool>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::input("spectrum table must have n+1 >= 1 entries"));
        }
        let n = table.len() - 1;
        let (l0, l1) = compute_l0_l1(&table);
        Ok(SymmetricSpec { n, table, l0, l1 })
    }

    pub fn or(n: usize) -> Self {
        Self::from_table((0..=n).map(|m| m >= 1).collect()).expect("valid table")
    }

    pub fn and(n: usize) -> Self {
        Self::from_table((0..=n).map(|m| m == n).collect()).expect("valid table")
    }

    pub fn parity(n: usize) -> Self {
        Self::from_table((0..=n).map(|m| m % 2 == 1).collect()).expect("valid table")
    }

    /// Threshold function: 1 exactly when the weight is at least `t`.
    pub fn threshold(n: usize, t: usize) -> Result<Self> {
        if t > n + 1 {
            return Err(Error::input(format!("threshold {t} out of range for n={n}")));
        }
        Self::from_table((0..=n).map(|m| m >= t).collect())
    }

    pub fn constant(n: usize, v: bool) -> Self {
        Self::from_table(vec![v; n + 1]).expect("valid table")
    }

    /// Parse the descriptor mini-language:
    /// `or | and | parity | thr:<t> | table:<n+1 bits>`.
    pub fn from_descriptor(desc: &str, n: usize) -> Result<Self> {
        match desc {
            "or" => Ok(Self::or(n)),
            "and" => Ok(Self::and(n)),
            "parity" => Ok(Self::parity(n)),
            _ => {
                if let Some(t) = desc.strip_prefix("thr:") {
                    let t: usize = t
                        .parse()
                        .map_err(|_| Error::input(format!("bad threshold in \"{desc}\"")))?;
                    Self::threshold(n, t)
                } else if let Some(bits) = desc.strip_prefix("table:") {
                    if bits.len() != n + 1 {
                        return Err(Error::input(format!(
                            "table descriptor has {} bits, expected n+1 = {}",
                            bits.len(),
                            n + 1
                        )));
                    }
                    let table = bits
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(Error::input(format!("bad table bit '{c}'"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Self::from_table(table)
                } else {
                    Err(Error::input(format!("unknown function descriptor \"{desc}\"")))
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l0(&self) -> usize {
        self.l0
    }

    pub fn l1(&self) -> usize {
        self.l1
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// `D(w)` for a Hamming weight `w`.
    pub fn value_at(&self, weight: usize) -> bool {
        self.table[weight]
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&b| b == self.table[0])
    }

    /// Pointwise negation of the spectrum.
    pub fn negated(&self) -> SymmetricSpec {
        SymmetricSpec {
            n: self.n,
            table: self.table.iter().map(|b| !b).collect(),
            l0: self.l0,
            l1: self.l1,
        }
    }
}

impl fmt::Debug for SymmetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricSpec(n={}, D=", self.n)?;
        for &b in &self.table {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ", l0={}, l1={})", self.l0, self.l1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_points_of_named_functions() {
        assert_eq!((SymmetricSpec::or(4).l0(), SymmetricSpec::or(4).l1()), (1, 0));
        assert_eq!((SymmetricSpec::parity(4).l0(), SymmetricSpec::parity(4).l1()), (2, 2));
        assert_eq!((SymmetricSpec::and(4).l0(), SymmetricSpec::and(4).l1()), (0, 1));
        let c = SymmetricSpec::constant(6, true);
        assert_eq!((c.l0(), c.l1()), (0, 0));
    }

    #[test]
    fn negation_keeps_change_points() {
        for n in 1..=8 {
            for t in 0..(1u32 << (n + 1)) {
                let table: Vec<bool> = (0..=n).map(|m| (t >> m) & 1 == 1).collect();
                let s = SymmetricSpec::from_table(table).unwrap();
                let neg = s.negated();
                assert_eq!((s.l0(), s.l1()), (neg.l0(), neg.l1()));
            }
        }
    }

    #[test]
    fn descriptor_parsing() {
        let thr = SymmetricSpec::from_descriptor("thr:2", 8).unwrap();
        assert_eq!((thr.l0(), thr.l1()), (2, 0));
        assert!(!thr.value_at(1));
        assert!(thr.value_at(2));

        let tab = SymmetricSpec::from_descriptor("table:00001", 4).unwrap();
        assert_eq!(tab, SymmetricSpec::and(4));

        assert!(SymmetricSpec::from_descriptor("table:001", 4).is_err());
        assert!(SymmetricSpec::from_descriptor("nope", 4).is_err());
    }
}
