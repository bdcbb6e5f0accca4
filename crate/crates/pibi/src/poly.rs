//! Integer polynomials in the party number `N`.

use std::fmt;

use crate::error::{PibiError, Result};

/// Degree cap for coefficient polynomials; every catalog family fits.
pub const MAX_DEGREE: u32 = 2;

/// Sparse integer polynomial `Σ c_p N^p`, stored sorted by power with no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    terms: Vec<(u32, i64)>,
}

impl IntPoly {
    /// Builds a polynomial from `(power, coefficient)` pairs, merging repeats.
    pub fn new(pairs: &[(u32, i64)]) -> Result<Self> {
        let mut terms: Vec<(u32, i64)> = Vec::new();
        for &(p, c) in pairs {
            if p > MAX_DEGREE && c != 0 {
                return Err(PibiError::DegreeTooHigh {
                    degree: p,
                    cap: MAX_DEGREE,
                });
            }
            match terms.iter_mut().find(|(q, _)| *q == p) {
                Some(t) => t.1 += c,
                None => terms.push((p, c)),
            }
        }
        terms.retain(|&(_, c)| c != 0);
        terms.sort_unstable_by_key(|&(p, _)| p);
        Ok(Self { terms })
    }

    /// `a·N + b`, the shape of nearly every catalog coefficient.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::new(&[(1, a), (0, b)]).expect("degree 1")
    }

    pub fn constant(c: i64) -> Self {
        Self::linear(0, c)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|&(p, _)| p)
    }

    pub fn eval(&self, n: i128) -> i128 {
        self.terms.iter().map(|&(p, c)| c as i128 * n.pow(p)).sum()
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(p, c)| c as f64 * n.powi(p as i32))
            .sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let pairs: Vec<_> = self.terms.iter().map(|&(p, c)| (p, c * k)).collect();
        Self::new(&pairs).expect("scaling keeps the degree")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(p, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.unsigned_abs();
            let coef = if mag == 1 && p > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            let var = match p {
                0 => String::new(),
                1 => "N".to_string(),
                _ => format!("N^{p}"),
            };
            write!(f, "{sign}{coef}{var}")?;
        }
        Ok(())
    }
}
