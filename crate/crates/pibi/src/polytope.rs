//! Vertices of the symmetrized local polytope and facet verification.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::correlator::{eval_partition_correlators, CorrelatorVector, Partition};
use crate::error::{PibiError, Result};
use crate::family::InequalityFamily;
use crate::label::CorrelatorLabel;

/// Largest `N` for which vertex sets are materialized.
pub const VERTEX_GUARD: u32 = 60;

/// Distinct images of all partitions of `N`, in first-seen order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexSet {
    pub n_parties: u32,
    pub max_order: u8,
    pub points: Vec<CorrelatorVector<i128>>,
}

impl VertexSet {
    /// Projection of every point onto the given labels.
    pub fn coordinates(&self, labels: &[CorrelatorLabel]) -> Vec<Vec<i128>> {
        self.points
            .iter()
            .map(|p| {
                labels
                    .iter()
                    .map(|&l| p.get(l).expect("label within order"))
                    .collect()
            })
            .collect()
    }
}

pub fn enumerate_vertices(n: u32, max_order: u8) -> Result<VertexSet> {
    if n > VERTEX_GUARD {
        return Err(PibiError::SizeLimit {
            what: "N",
            value: n as usize,
            limit: VERTEX_GUARD as usize,
        });
    }
    if !(2..=4).contains(&max_order) {
        return Err(PibiError::InvalidInput(format!(
            "order {max_order} outside 2..=4"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut points = Vec::new();
    for p in Partition::all(n) {
        let v = eval_partition_correlators(p, max_order);
        if seen.insert(v.values().to_vec()) {
            points.push(v);
        }
    }
    Ok(VertexSet {
        n_parties: n,
        max_order,
        points,
    })
}

/// Rank of an integer matrix, computed exactly.
///
/// Fraction-free elimination over big integers: each pivot step cross
/// multiplies and then divides the row by its content, which keeps entries
/// small without ever leaving the integers.
pub fn exact_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].abs())
        else {
            continue;
        };
        m.swap(rank, piv);
        let pivot_row = m[rank].clone();
        for r in m.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot_row[col] - &f * p;
            }
            let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g > BigInt::from(1) {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Affine rank of a point set: rank of the differences to the first point.
pub fn affine_rank(points: &[Vec<i128>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    exact_rank(&diffs)
}

/// Validity and facet status of an inequality on `P^S_{N,K}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetReport {
    pub family: String,
    pub n_parties: u32,
    pub valid: bool,
    /// Minimum over vertices, times the family denominator (an integer).
    pub min_value: i128,
    pub tight_count: usize,
    pub tight_affine_rank: usize,
    pub ambient_dim: usize,
    pub is_facet: bool,
}

/// Checks an inequality against every vertex of the polytope at `n`.
///
/// The tight vertices span a face; it is a facet when their affine rank is
/// one less than the affine dimension of the polytope itself.
pub fn facet_check(f: &InequalityFamily, n: u32) -> Result<FacetReport> {
    let order = f.max_order.max(2);
    let verts = enumerate_vertices(n, order)?;
    let labels = f.ambient_labels();
    let mut min_value = i128::MAX;
    let mut tight = Vec::new();
    for v in &verts.points {
        let val = f.eval_exact(v)?;
        let scaled = *val.numer() * (f.denominator as i128 / *val.denom());
        min_value = min_value.min(scaled);
        if scaled == 0 {
            tight.push(
                labels
                    .iter()
                    .map(|&l| v.get(l).expect("label within order"))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let mut coords = verts.coordinates(&labels);
    coords.sort();
    coords.dedup();
    let ambient_dim = affine_rank(&coords);
    tight.sort();
    tight.dedup();
    let tight_affine_rank = affine_rank(&tight);
    let valid = min_value >= 0;
    let is_facet = valid && !tight.is_empty() && tight_affine_rank + 1 == ambient_dim;
    Ok(FacetReport {
        family: f.name.clone(),
        n_parties: n,
        valid,
        min_value,
        tight_count: tight.len(),
        tight_affine_rank,
        ambient_dim,
        is_facet,
    })
}
