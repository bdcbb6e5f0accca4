//! Correlator vectors and their exact values on local deterministic strategies.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{PibiError, Result};
use crate::label::{CorrelatorLabel, MAX_ORDER};

/// Counts of parties using each of the four local deterministic strategies.
///
/// `a`: both settings output +1; `b`: setting 0 gives +1, setting 1 gives −1;
/// `c`: the reverse; `d`: both output −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Partition {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }

    pub fn n(&self) -> u32 {
        self.a + self.b + self.c + self.d
    }

    pub fn s0(&self) -> i64 {
        self.a as i64 + self.b as i64 - self.c as i64 - self.d as i64
    }

    pub fn s1(&self) -> i64 {
        self.a as i64 - self.b as i64 + self.c as i64 - self.d as i64
    }

    pub fn z(&self) -> i64 {
        self.a as i64 - self.b as i64 - self.c as i64 + self.d as i64
    }

    /// Every partition of `n` into four non-negative parts, lexicographically.
    pub fn all(n: u32) -> impl Iterator<Item = Partition> {
        (0..=n).flat_map(move |a| {
            (0..=n - a).flat_map(move |b| {
                (0..=n - a - b).map(move |c| Partition::new(a, b, c, n - a - b - c))
            })
        })
    }

    /// Number of partitions of `n`, i.e. C(n+3, 3).
    pub fn count(n: u32) -> u64 {
        let n = n as u64;
        (n + 1) * (n + 2) * (n + 3) / 6
    }
}

/// A point in symmetric correlator space holding every label up to `max_order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorVector<T> {
    pub n_parties: u32,
    pub max_order: u8,
    values: Vec<T>,
}

impl<T: Copy> CorrelatorVector<T> {
    /// Wraps values listed in canonical label order.
    pub fn from_values(n_parties: u32, max_order: u8, values: Vec<T>) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&max_order) {
            return Err(PibiError::InvalidInput(format!(
                "max order {max_order} outside 1..=4"
            )));
        }
        if values.len() != CorrelatorLabel::count_up_to(max_order) {
            return Err(PibiError::InvalidInput(format!(
                "order {max_order} needs {} values, got {}",
                CorrelatorLabel::count_up_to(max_order),
                values.len()
            )));
        }
        Ok(Self {
            n_parties,
            max_order,
            values,
        })
    }

    pub fn get(&self, l: CorrelatorLabel) -> Option<T> {
        self.values.get(l.index()).copied()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn labels(&self) -> Vec<CorrelatorLabel> {
        CorrelatorLabel::all_up_to(self.max_order)
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> CorrelatorVector<U> {
        CorrelatorVector {
            n_parties: self.n_parties,
            max_order: self.max_order,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Truncates to a lower order.
    pub fn truncated(&self, max_order: u8) -> Self {
        let k = max_order.min(self.max_order);
        Self {
            n_parties: self.n_parties,
            max_order: k,
            values: self.values[..CorrelatorLabel::count_up_to(k)].to_vec(),
        }
    }

    /// Relabels the settings 0 ↔ 1.
    pub fn swap_settings(&self) -> Self {
        let mut values = self.values.clone();
        for l in self.labels() {
            values[l.swapped().index()] = self.values[l.index()];
        }
        Self { values, ..*self }
    }
}

impl<T: Copy + std::ops::Neg<Output = T>> CorrelatorVector<T> {
    /// Flips every outcome sign, negating odd-order correlators.
    pub fn flip_outcomes(&self) -> Self {
        let mut out = self.clone();
        for l in self.labels() {
            if l.order() % 2 == 1 {
                out.values[l.index()] = -self.values[l.index()];
            }
        }
        out
    }
}

impl<T: Copy + Add<Output = T>> Add for &CorrelatorVector<T> {
    type Output = CorrelatorVector<T>;

    fn add(self, rhs: Self) -> CorrelatorVector<T> {
        assert_eq!(self.max_order, rhs.max_order, "orders differ");
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(&a, &b)| a + b)
            .collect();
        CorrelatorVector {
            n_parties: self.n_parties,
            max_order: self.max_order,
            values,
        }
    }
}

impl<T: Copy + Mul<Output = T>> CorrelatorVector<T> {
    pub fn scale(&self, t: T) -> Self {
        self.map(|v| v * t)
    }
}

impl CorrelatorVector<i128> {
    pub fn to_f64(&self) -> CorrelatorVector<f64> {
        self.map(|v| v as f64)
    }
}

/// Exact correlators of the strategy class `p`, via the closed forms in
/// `(S0, S1, Z, N)`. Each `k`-body value counts ordered distinct `k`-tuples.
pub fn eval_partition_correlators(p: Partition, max_order: u8) -> CorrelatorVector<i128> {
    let k = max_order.clamp(1, MAX_ORDER);
    let all = lds_values(p.n() as i128, p.s0() as i128, p.s1() as i128, p.z() as i128);
    CorrelatorVector {
        n_parties: p.n(),
        max_order: k,
        values: all[..CorrelatorLabel::count_up_to(k)].to_vec(),
    }
}

/// The fourteen correlators as polynomials in `(N, S0, S1, Z)`.
///
/// Generic so that the same expressions serve exact integer evaluation and
/// the floating-point moment checks.
pub fn lds_values<T>(n: T, s0: T, s1: T, z: T) -> [T; 14]
where
    T: Copy + Add<Output = T> + std::ops::Sub<Output = T> + Mul<Output = T> + From<i8>,
{
    let c = |v: i8| T::from(v);
    let s0s0 = s0 * s0;
    let s1s1 = s1 * s1;
    let s0s1 = s0 * s1;
    [
        s0,
        s1,
        s0s0 - n,
        s0s1 - z,
        s1s1 - n,
        s0s0 * s0 + c(2) * s0 - c(3) * n * s0,
        s0s0 * s1 + c(2) * s1 - n * s1 - c(2) * z * s0,
        s0 * s1s1 + c(2) * s0 - n * s0 - c(2) * z * s1,
        s1s1 * s1 + c(2) * s1 - c(3) * n * s1,
        s0s0 * s0s0 - c(6) * n + c(3) * n * n - c(6) * n * s0s0 + c(8) * s0s0,
        s0s0 * s0s1 - c(6) * z + c(3) * n * z - c(3) * n * s0s1 - c(3) * z * s0s0 + c(8) * s0s1,
        s0s0 * s1s1 - c(6) * n + n * n + c(2) * z * z - n * s1s1 - n * s0s0 - c(4) * z * s0s1
            + c(4) * s1s1
            + c(4) * s0s0,
        s0s1 * s1s1 - c(6) * z + c(3) * n * z - c(3) * n * s0s1 - c(3) * z * s1s1 + c(8) * s0s1,
        s1s1 * s1s1 - c(6) * n + c(3) * n * n - c(6) * n * s1s1 + c(8) * s1s1,
    ]
}
