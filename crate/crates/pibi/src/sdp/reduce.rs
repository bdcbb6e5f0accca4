//! Polynomials in the reduced coordinates `(S_0, S_1, Z)` and the reduction
//! of correlator expressions modulo the ideal of local deterministic points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{PibiError, Result};
use crate::label::CorrelatorLabel;

/// Highest total degree a moment-matrix entry can reach.
pub const MAX_MOMENT_DEGREE: u8 = 7;

/// `S_0^p S_1^q Z^r`, ordered by total degree first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MomentMonomial {
    p: u8,
    q: u8,
    r: u8,
}

impl MomentMonomial {
    pub const ONE: Self = Self { p: 0, q: 0, r: 0 };

    pub fn new(p: u8, q: u8, r: u8) -> Result<Self> {
        let m = Self { p, q, r };
        if m.degree() > MAX_MOMENT_DEGREE {
            return Err(PibiError::DegreeOverflow(m.degree() as u32));
        }
        Ok(m)
    }

    pub fn exponents(self) -> (u8, u8, u8) {
        (self.p, self.q, self.r)
    }

    pub fn degree(self) -> u8 {
        self.p + self.q + self.r
    }

    pub fn eval(self, s0: f64, s1: f64, z: f64) -> f64 {
        s0.powi(self.p as i32) * s1.powi(self.q as i32) * z.powi(self.r as i32)
    }

    fn times(self, o: Self) -> Result<Self> {
        Self::new(self.p + o.p, self.q + o.q, self.r + o.r)
    }
}

impl PartialOrd for MomentMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MomentMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), std::cmp::Reverse((self.p, self.q, self.r))).cmp(&(
            other.degree(),
            std::cmp::Reverse((other.p, other.q, other.r)),
        ))
    }
}

impl fmt::Display for MomentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in [("S0", self.p), ("S1", self.q), ("Z", self.r)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse real polynomial in three variables. No zero coefficients are
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReducedPolynomial {
    terms: BTreeMap<MomentMonomial, f64>,
}

impl ReducedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::term(MomentMonomial::ONE, c)
    }

    pub fn term(m: MomentMonomial, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The variables `S_0`, `S_1`, `Z` for `i = 0, 1, 2`.
    pub fn var(i: usize) -> Self {
        let m = match i {
            0 => MomentMonomial { p: 1, q: 0, r: 0 },
            1 => MomentMonomial { p: 0, q: 1, r: 0 },
            2 => MomentMonomial { p: 0, q: 0, r: 1 },
            _ => panic!("three variables"),
        };
        Self::term(m, 1.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MomentMonomial, f64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, m: MomentMonomial) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(MomentMonomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u8 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, s0: f64, s1: f64, z: f64) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.eval(s0, s1, z)).sum()
    }

    fn add_term(&mut self, m: MomentMonomial, c: f64) {
        let e = self.terms.entry(m).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    /// Substitutes every variable `v → t·v` and multiplies by `overall`.
    pub fn rescaled(&self, t: f64, overall: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * overall * t.powi(m.degree() as i32)))
                .collect(),
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.times(*mb)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude of `self − o`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self - o).terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl Add for &ReducedPolynomial {
    type Output = ReducedPolynomial;
    fn add(self, o: &ReducedPolynomial) -> ReducedPolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &ReducedPolynomial {
    type Output = ReducedPolynomial;
    fn sub(self, o: &ReducedPolynomial) -> ReducedPolynomial {
        self + &o.scale(-1.0)
    }
}

impl Neg for &ReducedPolynomial {
    type Output = ReducedPolynomial;
    fn neg(self) -> ReducedPolynomial {
        self.scale(-1.0)
    }
}

impl Mul for &ReducedPolynomial {
    type Output = ReducedPolynomial;
    /// Panics on degree overflow; use [`ReducedPolynomial::try_mul`] when
    /// the degree is not known to be small.
    fn mul(self, o: &ReducedPolynomial) -> ReducedPolynomial {
        self.try_mul(o).expect("product within the degree cap")
    }
}

impl fmt::Display for ReducedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A polynomial in correlator symbols: `Σ c · S_{w1} S_{w2} ⋯`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorrelatorExpr {
    pub terms: Vec<(f64, Vec<CorrelatorLabel>)>,
}

impl CorrelatorExpr {
    pub fn constant(c: f64) -> Self {
        Self {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn symbol(l: CorrelatorLabel) -> Self {
        Self {
            terms: vec![(1.0, vec![l])],
        }
    }

    pub fn plus(mut self, o: Self) -> Self {
        self.terms.extend(o.terms);
        self
    }

    pub fn scale(mut self, k: f64) -> Self {
        self.terms.iter_mut().for_each(|t| t.0 *= k);
        self
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut terms = Vec::new();
        for (ca, la) in &self.terms {
            for (cb, lb) in &o.terms {
                terms.push((ca * cb, la.iter().chain(lb).copied().collect()));
            }
        }
        Self { terms }
    }
}

/// Ideal generator for one correlator of order ≤ 3, in raw coordinates.
pub fn label_polynomial(l: CorrelatorLabel, n_parties: u32) -> Result<ReducedPolynomial> {
    let n = n_parties as f64;
    let (s0, s1, z) = (
        ReducedPolynomial::var(0),
        ReducedPolynomial::var(1),
        ReducedPolynomial::var(2),
    );
    let k = ReducedPolynomial::constant;
    let cube = |x: &ReducedPolynomial| &(x * x) * x;
    Ok(match (l.order(), l.ones()) {
        (1, 0) => s0,
        (1, 1) => s1,
        (2, 0) => &(&s0 * &s0) - &k(n),
        (2, 1) => &(&s0 * &s1) - &z,
        (2, 2) => &(&s1 * &s1) - &k(n),
        (3, 0) => &cube(&s0) + &s0.scale(2.0 - 3.0 * n),
        (3, 1) => &(&(&(&s0 * &s0) * &s1) + &s1.scale(2.0 - n)) - &(&z * &s0).scale(2.0),
        (3, 2) => &(&(&(&s1 * &s1) * &s0) + &s0.scale(2.0 - n)) - &(&z * &s1).scale(2.0),
        (3, 3) => &cube(&s1) + &s1.scale(2.0 - 3.0 * n),
        _ => {
            return Err(PibiError::InvalidInput(format!(
                "the moment relaxation covers orders ≤ 3, got {l}"
            )));
        }
    })
}

/// Replaces every correlator by its polynomial in `(S_0, S_1, Z)` at fixed
/// `N`, expands and collects.
pub fn reduce_mod_ideal(expr: &CorrelatorExpr, n_parties: u32) -> Result<ReducedPolynomial> {
    let mut out = ReducedPolynomial::zero();
    for (c, labels) in &expr.terms {
        let mut t = ReducedPolynomial::constant(*c);
        for l in labels {
            t = t.try_mul(&label_polynomial(*l, n_parties)?)?;
        }
        out = &out + &t;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::{eval_partition_correlators, Partition};
    use crate::label::label;

    fn sym(s: &str) -> CorrelatorExpr {
        CorrelatorExpr::symbol(label(s))
    }

    #[test]
    fn two_body_generator() {
        let r = reduce_mod_ideal(&sym("00"), 7).unwrap();
        let want = &(&ReducedPolynomial::var(0) * &ReducedPolynomial::var(0))
            - &ReducedPolynomial::constant(7.0);
        assert_eq!(r, want);
    }

    #[test]
    fn multiplier_reduces_to_partition_count() {
        let n = 9.0;
        let s0 = sym("0");
        let g = s0
            .times(&s0)
            .plus(sym("00").scale(-1.0))
            .plus(sym("0"))
            .plus(sym("1"))
            .plus(sym("0").times(&sym("1")))
            .plus(sym("01").scale(-1.0))
            .scale(0.25);
        let r = reduce_mod_ideal(&g, 9).unwrap();
        let want = &(&(&ReducedPolynomial::constant(n) + &ReducedPolynomial::var(0))
            + &ReducedPolynomial::var(1))
            + &ReducedPolynomial::var(2);
        assert!(r.max_abs_diff(&want.scale(0.25)) < 1e-15, "{r}");
    }

    #[test]
    fn generator_minus_its_reduction_vanishes() {
        let s0 = sym("0");
        let e = sym("000")
            .plus(s0.times(&s0).times(&s0).scale(-1.0))
            .plus(s0.scale(-(2.0 - 3.0 * 11.0)));
        assert!(reduce_mod_ideal(&e, 11).unwrap().is_zero());
    }

    #[test]
    fn generators_match_partition_values() {
        for p in Partition::all(6) {
            let v = eval_partition_correlators(p, 3);
            for l in CorrelatorLabel::all_up_to(3) {
                let poly = label_polynomial(l, 6).unwrap();
                assert_eq!(
                    poly.eval(p.s0() as f64, p.s1() as f64, p.z() as f64),
                    v.get(l).unwrap() as f64
                );
            }
        }
    }

    #[test]
    fn linear_and_idempotent() {
        let a = sym("001").times(&sym("01"));
        let b = sym("11").scale(3.0);
        let ra = reduce_mod_ideal(&a, 5).unwrap();
        let rb = reduce_mod_ideal(&b, 5).unwrap();
        let rab = reduce_mod_ideal(&a.clone().plus(b), 5).unwrap();
        assert!(rab.max_abs_diff(&(&ra + &rb)) < 1e-12);
        // a reduced polynomial in S_0, S_1 only is already its own reduction
        let s = sym("0")
            .times(&sym("1"))
            .plus(CorrelatorExpr::constant(2.0));
        let r = reduce_mod_ideal(&s, 5).unwrap();
        assert_eq!(
            r,
            &(&ReducedPolynomial::var(0) * &ReducedPolynomial::var(1))
                + &ReducedPolynomial::constant(2.0)
        );
    }

    #[test]
    fn degree_cap() {
        let e = sym("000")
            .times(&sym("000"))
            .times(&sym("0"))
            .times(&sym("1"));
        assert!(matches!(
            reduce_mod_ideal(&e, 5),
            Err(PibiError::DegreeOverflow(8))
        ));
        assert!(reduce_mod_ideal(&sym("0000"), 5).is_err());
    }
}
