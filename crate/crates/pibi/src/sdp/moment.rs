//! First-level moment matrices of the symmetrized local polytope.
//!
//! Everything is expressed in the scaled coordinates `s0 = S_0/N`,
//! `s1 = S_1/N`, `z = Z/N`, with correlators normalized as `x_w = S_w/N^k`.
//! This is an invertible linear change of variables, so membership is
//! unaffected, but the linearized SDP stays well conditioned for large `N`.

use std::collections::BTreeMap;

use super::reduce::{
    label_polynomial, reduce_mod_ideal, CorrelatorExpr, MomentMonomial, ReducedPolynomial,
};
use crate::correlator::CorrelatorVector;
use crate::error::{PibiError, Result};
use crate::label::{label, CorrelatorLabel};

/// Side of each moment block.
pub const BASIS_LEN: usize = 10;
/// `Γ_0` plus one localizing block per strategy class.
pub const BLOCKS: usize = 5;

/// Labels of the basis after the leading `1`.
pub fn basis_labels() -> Vec<CorrelatorLabel> {
    CorrelatorLabel::all_up_to(3)
}

/// `S_w / N^k` as a polynomial in the scaled coordinates.
pub fn scaled_label_polynomial(l: CorrelatorLabel, n_parties: u32) -> Result<ReducedPolynomial> {
    let n = n_parties as f64;
    Ok(label_polynomial(l, n_parties)?.rescaled(n, n.powi(-(l.order() as i32))))
}

/// The four class counts `a, b, c, d` over `N`, reduced from their
/// correlator expressions `((S_0² − S_00) ± S_0 ± S_1 ± (S_0 S_1 − S_01))/4`.
pub fn scaled_multipliers(n_parties: u32) -> Result<Vec<ReducedPolynomial>> {
    let sym = |s: &str| CorrelatorExpr::symbol(label(s));
    let nn = sym("0").times(&sym("0")).plus(sym("00").scale(-1.0));
    let zz = sym("0").times(&sym("1")).plus(sym("01").scale(-1.0));
    let n = n_parties as f64;
    [
        (1.0, 1.0, 1.0),
        (1.0, -1.0, -1.0),
        (-1.0, 1.0, -1.0),
        (-1.0, -1.0, 1.0),
    ]
    .into_iter()
    .map(|(a, b, c)| {
        let e = nn
            .clone()
            .plus(sym("0").scale(a))
            .plus(sym("1").scale(b))
            .plus(zz.clone().scale(c))
            .scale(0.25);
        Ok(reduce_mod_ideal(&e, n_parties)?.rescaled(n, 1.0 / n))
    })
    .collect()
}

/// All 5 × 10 × 10 reduced entries and the shared monomial indexing.
#[derive(Clone, Debug)]
pub struct MomentMatrixSpec {
    pub n_parties: u32,
    /// `(1, x_0, x_1, x_00, …, x_111)`.
    pub basis: Vec<ReducedPolynomial>,
    /// `1, g_1, …, g_4`.
    pub multipliers: Vec<ReducedPolynomial>,
    /// `blocks[i][r·10 + c] = g_i b_r b_c`.
    pub blocks: Vec<Vec<ReducedPolynomial>>,
    /// Non-constant monomials, one SDP variable each.
    pub monomials: Vec<MomentMonomial>,
    pub index: BTreeMap<MomentMonomial, usize>,
}

impl MomentMatrixSpec {
    pub fn build(n_parties: u32) -> Result<Self> {
        if n_parties < 2 {
            return Err(PibiError::InvalidInput(
                "the moment relaxation needs N ≥ 2".into(),
            ));
        }
        let mut basis = vec![ReducedPolynomial::constant(1.0)];
        for l in basis_labels() {
            basis.push(scaled_label_polynomial(l, n_parties)?);
        }
        let mut multipliers = vec![ReducedPolynomial::constant(1.0)];
        multipliers.extend(scaled_multipliers(n_parties)?);
        let mut blocks = Vec::with_capacity(BLOCKS);
        for g in &multipliers {
            let mut entries = Vec::with_capacity(BASIS_LEN * BASIS_LEN);
            for r in 0..BASIS_LEN {
                for c in 0..BASIS_LEN {
                    entries.push(g.try_mul(&basis[r])?.try_mul(&basis[c])?);
                }
            }
            blocks.push(entries);
        }
        let mut set = std::collections::BTreeSet::new();
        for b in &blocks {
            for e in b {
                set.extend(
                    e.terms()
                        .map(|(m, _)| m)
                        .filter(|m| *m != MomentMonomial::ONE),
                );
            }
        }
        let monomials: Vec<MomentMonomial> = set.into_iter().collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Ok(Self {
            n_parties,
            basis,
            multipliers,
            blocks,
            monomials,
            index,
        })
    }

    pub fn entry(&self, block: usize, r: usize, c: usize) -> &ReducedPolynomial {
        &self.blocks[block][r * BASIS_LEN + c]
    }

    /// Splits a polynomial into its constant and a sparse row over the
    /// monomial variables.
    pub fn linearize(&self, p: &ReducedPolynomial) -> (f64, Vec<(usize, f64)>) {
        let mut row = Vec::new();
        for (m, c) in p.terms() {
            if m != MomentMonomial::ONE {
                row.push((self.index[&m], c));
            }
        }
        (p.constant_term(), row)
    }

    pub fn max_degree(&self) -> u8 {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Block `i` evaluated at an actual point of scaled coordinates.
    pub fn evaluate_block(&self, block: usize, s0: f64, s1: f64, z: f64) -> Vec<f64> {
        self.blocks[block]
            .iter()
            .map(|p| p.eval(s0, s1, z))
            .collect()
    }

    /// Scaled target `x_w = S_w / N^k` for the nine basis labels.
    pub fn scaled_point(&self, point: &CorrelatorVector<f64>) -> Result<Vec<f64>> {
        let n = self.n_parties as f64;
        basis_labels()
            .into_iter()
            .map(|l| {
                point
                    .get(l)
                    .map(|v| v / n.powi(l.order() as i32))
                    .ok_or_else(|| PibiError::MissingCorrelator(l.to_string()))
            })
            .collect()
    }
}
