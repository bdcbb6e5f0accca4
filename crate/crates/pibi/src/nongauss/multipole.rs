//! Spherical tensor operators `T_kq` on the spin-`j` irrep and the multipole
//! coefficients `ρ_kq = Tr(ρ T†_kq)` of a state.
//!
//! `T_kq` only connects `|j m⟩` to `|j m+q⟩`, so each operator is stored as
//! one real vector indexed by the Dicke column `a` (`m = j − a`); its entry
//! sits at row `a − q`.

use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::cg::clebsch_gordan_squared;
use crate::error::{PibiError, Result};

/// All `T_kq` for one spin, built by ladder recursion.
#[derive(Clone, Debug)]
pub struct MultipoleBasis {
    pub n_parties: u32,
    /// `tensors[k][q + k][a] = ⟨j, m_a + q| T_kq |j, m_a⟩`.
    tensors: Vec<Vec<Vec<f64>>>,
}

impl MultipoleBasis {
    pub fn new(n_parties: u32) -> Self {
        let nn = n_parties as usize;
        let dim = nn + 1;
        let j = n_parties as f64 / 2.0;
        let m = |a: i64| j - a as f64;
        let raise = |mv: f64| (j * (j + 1.0) - mv * (mv + 1.0)).max(0.0).sqrt();
        let lower = |mv: f64| (j * (j + 1.0) - mv * (mv - 1.0)).max(0.0).sqrt();
        let mut tensors = Vec::with_capacity(dim);
        for k in 0..=nn {
            // T_kk ∝ S₊^k, normalized in Hilbert–Schmidt norm.
            let mut top = vec![0.0; dim];
            for (a, t) in top.iter_mut().enumerate().skip(k) {
                *t = (0..k).map(|i| raise(m(a as i64) + i as f64)).product();
            }
            let norm = top.iter().map(|t| t * t).sum::<f64>().sqrt();
            // Phase fixed by the exact coefficient at the m = −j column.
            let (sign, _) = clebsch_gordan_squared(
                nn as i64,
                -(nn as i64),
                2 * k as i64,
                2 * k as i64,
                nn as i64,
                2 * k as i64 - nn as i64,
            )
            .expect("allowed coupling");
            let s = sign as f64 / norm;
            top.iter_mut().for_each(|t| *t *= s);

            let mut row = vec![Vec::new(); 2 * k + 1];
            row[2 * k] = top;
            // [S₋, T_kq] = √((k+q)(k−q+1)) T_{k,q−1}
            for q in (-(k as i64) + 1..=k as i64).rev() {
                let t = &row[(q + k as i64) as usize];
                let at = |a: i64| {
                    if a >= 0 && a < dim as i64 && a - q >= 0 && a - q < dim as i64 {
                        t[a as usize]
                    } else {
                        0.0
                    }
                };
                let scale = (((k as i64 + q) * (k as i64 - q + 1)) as f64).sqrt();
                let next: Vec<f64> = (0..dim as i64)
                    .map(|a| {
                        if a - q + 1 < 0 || a - q + 1 >= dim as i64 {
                            return 0.0;
                        }
                        (lower(m(a - q)) * at(a) - at(a + 1) * lower(m(a))) / scale
                    })
                    .collect();
                row[(q - 1 + k as i64) as usize] = next;
            }
            tensors.push(row);
        }
        Self { n_parties, tensors }
    }

    pub fn max_rank(&self) -> usize {
        self.n_parties as usize
    }

    /// Column-indexed entries of `T_kq`.
    pub fn tensor(&self, k: usize, q: i64) -> &[f64] {
        &self.tensors[k][(q + k as i64) as usize]
    }

    /// Matrix element `(row, col)` in the Dicke basis.
    pub fn element(&self, k: usize, q: i64, row: usize, col: usize) -> f64 {
        if row as i64 == col as i64 - q {
            self.tensor(k, q)[col]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self, k: usize, q: i64) -> Mat<C64> {
        let d = self.n_parties as usize + 1;
        Mat::from_fn(d, d, |r, c| C64::new(self.element(k, q, r, c), 0.0))
    }
}

/// `ρ_kq` for `k = 0..=2j`, `q = −k..=k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipoleDecomposition {
    pub n_parties: u32,
    /// `coefficients[k][q + k]`.
    pub coefficients: Vec<Vec<C64>>,
}

impl MultipoleDecomposition {
    /// Decomposition of a pure state; `psi` is normalized first.
    pub fn from_state(psi: &[C64]) -> Result<Self> {
        let basis = MultipoleBasis::new(dim_to_parties(psi.len())?);
        Self::from_state_with(&basis, psi)
    }

    pub fn from_state_with(basis: &MultipoleBasis, psi: &[C64]) -> Result<Self> {
        check_dim(basis, psi.len())?;
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if norm.is_nan() || norm <= 0.0 {
            return Err(PibiError::InvalidInput(
                "the zero vector is not a state".into(),
            ));
        }
        Ok(Self::collect(basis, |r, c| psi[r] * psi[c].conj() / norm))
    }

    /// Decomposition of a density matrix; it must have unit trace.
    pub fn from_density(rho: &Mat<C64>) -> Result<Self> {
        let basis = MultipoleBasis::new(dim_to_parties(rho.nrows())?);
        Self::from_density_with(&basis, rho)
    }

    pub fn from_density_with(basis: &MultipoleBasis, rho: &Mat<C64>) -> Result<Self> {
        check_dim(basis, rho.nrows())?;
        if rho.ncols() != rho.nrows() {
            return Err(PibiError::InvalidInput(
                "density matrix must be square".into(),
            ));
        }
        let tr: C64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(PibiError::InvalidInput(format!(
                "density matrix has trace {tr}"
            )));
        }
        Ok(Self::collect(basis, |r, c| rho[(r, c)]))
    }

    fn collect(basis: &MultipoleBasis, rho: impl Fn(usize, usize) -> C64) -> Self {
        let d = basis.n_parties as usize + 1;
        let coefficients = (0..d)
            .map(|k| {
                (-(k as i64)..=k as i64)
                    .map(|q| {
                        let t = basis.tensor(k, q);
                        (0..d)
                            .filter(|&a| a as i64 - q >= 0 && (a as i64 - q) < d as i64)
                            .map(|a| rho((a as i64 - q) as usize, a) * t[a])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Self {
            n_parties: basis.n_parties,
            coefficients,
        }
    }

    pub fn max_rank(&self) -> usize {
        self.n_parties as usize
    }

    pub fn get(&self, k: usize, q: i64) -> C64 {
        self.coefficients[k][(q + k as i64) as usize]
    }

    /// Largest violation of `ρ_{k,−q} = (−1)^q conj(ρ_kq)`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..=self.max_rank() {
            for q in 0..=k as i64 {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                worst = worst.max((self.get(k, -q) - self.get(k, q).conj() * sign).norm());
            }
        }
        worst
    }
}

fn dim_to_parties(d: usize) -> Result<u32> {
    if d == 0 {
        return Err(PibiError::InvalidInput("empty state".into()));
    }
    Ok((d - 1) as u32)
}

fn check_dim(basis: &MultipoleBasis, d: usize) -> Result<()> {
    if d != basis.n_parties as usize + 1 {
        return Err(PibiError::InvalidInput(format!(
            "state of dimension {d} for N = {}",
            basis.n_parties
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nongauss::cg::clebsch_gordan_doubled;

    #[test]
    fn ladder_matches_exact_coefficients() {
        for n in [1u32, 2, 5, 8] {
            let b = MultipoleBasis::new(n);
            let nn = n as i64;
            for k in 0..=n as usize {
                let pre = ((2 * k + 1) as f64 / (n + 1) as f64).sqrt();
                for q in -(k as i64)..=k as i64 {
                    for a in 0..=n as usize {
                        let tm = nn - 2 * a as i64;
                        let want = pre
                            * clebsch_gordan_doubled(nn, tm, 2 * k as i64, 2 * q, nn, tm + 2 * q);
                        let row = a as i64 - q;
                        let got = if (0..=nn).contains(&row) {
                            b.element(k, q, row as usize, a)
                        } else {
                            0.0
                        };
                        assert!(
                            (got - want).abs() < 1e-12,
                            "N={n} k={k} q={q} a={a}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn high_rank_entries_at_n_fifty() {
        let b = MultipoleBasis::new(50);
        let pre = |k: usize| ((2 * k + 1) as f64 / 51.0).sqrt();
        for (k, q, a) in [
            (50usize, 0i64, 25usize),
            (37, -12, 3),
            (49, 30, 40),
            (20, 0, 0),
        ] {
            let tm = 50 - 2 * a as i64;
            let want = pre(k) * clebsch_gordan_doubled(50, tm, 2 * k as i64, 2 * q, 50, tm + 2 * q);
            assert!(
                (b.tensor(k, q)[a] - want).abs() < 1e-9,
                "k={k} q={q}: {} vs {want}",
                b.tensor(k, q)[a]
            );
        }
    }

    #[test]
    fn tensors_are_orthonormal() {
        let b = MultipoleBasis::new(4);
        for k in 0..=4 {
            for q in -(k as i64)..=k as i64 {
                let t = b.tensor(k, q);
                assert!((t.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
                if k > 0 {
                    let u = b.tensor(k - 1, q.clamp(-(k as i64 - 1), k as i64 - 1));
                    if q.abs() < k as i64 {
                        assert!(t.iter().zip(u).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn monopole_and_symmetry() {
        let psi: Vec<C64> = (0..9)
            .map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let d = MultipoleDecomposition::from_state(&psi).unwrap();
        assert!((d.get(0, 0) - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!(d.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_only_monopole() {
        let rho = Mat::from_fn(6, 6, |i, j| {
            if i == j {
                C64::new(1.0 / 6.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let d = MultipoleDecomposition::from_density(&rho).unwrap();
        for k in 1..=5 {
            for q in -(k as i64)..=k as i64 {
                assert!(d.get(k, q).norm() < 1e-12);
            }
        }
        assert!((d.get(0, 0).re - 6f64.sqrt().recip()).abs() < 1e-14);
    }

    #[test]
    fn rejects_wrong_trace() {
        let rho = Mat::from_fn(3, 3, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!(MultipoleDecomposition::from_density(&rho).is_err());
    }
}
