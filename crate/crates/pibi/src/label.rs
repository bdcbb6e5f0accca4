//! Setting words that name permutationally invariant correlators.

use std::fmt;
use std::str::FromStr;

use crate::error::{PibiError, Result};

/// Highest correlator order handled anywhere in the crate.
pub const MAX_ORDER: u8 = 4;

/// A sorted word over the settings `{0, 1}`.
///
/// Permutational symmetry makes the order of letters irrelevant, so a word is
/// fully described by its length and its number of ones: `"010"` and `"001"`
/// are the same label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrelatorLabel {
    order: u8,
    ones: u8,
}

impl CorrelatorLabel {
    pub fn new(order: u8, ones: u8) -> Result<Self> {
        if order == 0 || order > MAX_ORDER || ones > order {
            return Err(PibiError::InvalidInput(format!(
                "no correlator with order {order} and {ones} ones"
            )));
        }
        Ok(Self { order, ones })
    }

    pub fn order(self) -> u8 {
        self.order
    }

    pub fn ones(self) -> u8 {
        self.ones
    }

    pub fn zeros(self) -> u8 {
        self.order - self.ones
    }

    /// Position in the canonical ordering `0, 1, 00, 01, 11, 000, ...`.
    pub fn index(self) -> usize {
        let k = self.order as usize;
        k * (k + 1) / 2 - 1 + self.ones as usize
    }

    /// The label obtained by exchanging the two settings.
    pub fn swapped(self) -> Self {
        Self {
            order: self.order,
            ones: self.order - self.ones,
        }
    }

    /// Letters of the sorted word, zeros first.
    pub fn letters(self) -> Vec<u8> {
        let mut w = vec![0u8; self.zeros() as usize];
        w.extend(std::iter::repeat(1u8).take(self.ones as usize));
        w
    }

    /// All labels of order at most `k`, in canonical order.
    pub fn all_up_to(k: u8) -> Vec<Self> {
        (1..=k.min(MAX_ORDER))
            .flat_map(|order| (0..=order).map(move |ones| Self { order, ones }))
            .collect()
    }

    /// Number of labels of order at most `k`.
    pub fn count_up_to(k: u8) -> usize {
        let k = k as usize;
        (k + 1) * (k + 2) / 2 - 1
    }
}

impl fmt::Display for CorrelatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.zeros() {
            f.write_str("0")?;
        }
        for _ in 0..self.ones {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl FromStr for CorrelatorLabel {
    type Err = PibiError;

    /// Parses any word over `{0,1}`; the result is canonicalized by sorting.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('S').trim_start_matches('_');
        let bad = || PibiError::Parse {
            what: "correlator label",
            detail: s.to_string(),
        };
        if s.is_empty() || s.len() > MAX_ORDER as usize {
            return Err(bad());
        }
        let mut ones = 0u8;
        for ch in s.chars() {
            match ch {
                '0' => {}
                '1' => ones += 1,
                _ => return Err(bad()),
            }
        }
        Self::new(s.len() as u8, ones)
    }
}

impl serde::Serialize for CorrelatorLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for CorrelatorLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and the catalog: panics on a bad literal.
pub fn label(s: &str) -> CorrelatorLabel {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}
