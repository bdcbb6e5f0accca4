//! Spin Wigner function `W(θ,φ) = √(4π/(2j+1)) Σ_kq ρ_kq Y_kq(θ,φ)` and its
//! negativity, integrated on a Gauss–Legendre × uniform-φ grid.
//!
//! With this normalization `(2j+1)/(4π) ∫ W dΩ = 1` and the maximally mixed
//! state has `W ≡ 1/(2j+1)`.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::multipole::MultipoleDecomposition;
use crate::error::{PibiError, Result};

/// Largest number of grid doublings in [`wigner_negativity`].
pub const MAX_DOUBLINGS: usize = 4;
/// Refinement stops once the negativity changes by less than this.
pub const REFINE_TOL: f64 = 1e-3;

/// Quadrature nodes on the unit sphere.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereGrid {
    /// Polar angles, ascending.
    pub theta: Vec<f64>,
    /// Gauss–Legendre weights in `cos θ`.
    pub weights: Vec<f64>,
    pub phi: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 1 {
            return Err(PibiError::InvalidInput(format!(
                "sphere grid {n_theta}×{n_phi} is too small"
            )));
        }
        let gl = GaussLegendre::new(n_theta).map_err(|e| PibiError::InvalidInput(e.to_string()))?;
        let mut nodes: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
        nodes.sort_by(|a, b| b.0.total_cmp(&a.0));
        let phi = (0..n_phi)
            .map(|l| 2.0 * PI * l as f64 / n_phi as f64)
            .collect();
        Ok(Self {
            theta: nodes
                .iter()
                .map(|(x, _)| x.clamp(-1.0, 1.0).acos())
                .collect(),
            weights: nodes.iter().map(|(_, w)| *w).collect(),
            phi,
        })
    }

    /// `2(2j+1)` polar nodes and `2(2j+1)+1` azimuths.
    pub fn for_parties(n_parties: u32) -> Self {
        let d = n_parties as usize + 1;
        Self::new(2 * d, 2 * d + 1).expect("default grid is valid")
    }

    /// Twice as many nodes in each angle.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(2 * self.theta.len(), 2 * self.phi.len())
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    /// `∫ f dΩ` for values stored row-major (θ outer, φ inner).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let np = self.n_phi();
        let dphi = 2.0 * PI / np as f64;
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * dphi * values[i * np..(i + 1) * np].iter().sum::<f64>())
            .sum()
    }
}

/// Orthonormal associated Legendre values `P̄_k^q(x)` for `k = q..=k_max`,
/// Condon–Shortley phase included, so `Y_kq = P̄_k^q(cos θ) e^{iqφ}`.
pub fn normalized_legendre(k_max: usize, q: usize, x: f64) -> Vec<f64> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pqq = (0.25 / PI).sqrt();
    for l in 1..=q {
        pqq *= -((2 * l + 1) as f64 / (2 * l) as f64).sqrt() * s;
    }
    let mut out = Vec::with_capacity(k_max + 1 - q.min(k_max + 1));
    if q > k_max {
        return out;
    }
    out.push(pqq);
    if k_max == q {
        return out;
    }
    out.push((2.0 * q as f64 + 3.0).sqrt() * x * pqq);
    let a = |k: usize| (((4 * k * k - 1) as f64) / ((k * k - q * q) as f64)).sqrt();
    for k in q + 2..=k_max {
        let n = out.len();
        let v = a(k) * (x * out[n - 1] - out[n - 2] / a(k - 1));
        out.push(v);
    }
    out
}

/// `F_q(x) = Σ_k ρ_kq P̄_k^q(x)` for `q = 0..=2j`.
fn azimuthal_coefficients(m: &MultipoleDecomposition, x: f64) -> Vec<C64> {
    let kmax = m.max_rank();
    (0..=kmax)
        .map(|q| {
            normalized_legendre(kmax, q, x)
                .iter()
                .enumerate()
                .map(|(i, p)| m.get(q + i, q as i64) * *p)
                .sum()
        })
        .collect()
}

fn prefactor(m: &MultipoleDecomposition) -> f64 {
    (4.0 * PI / (m.n_parties as f64 + 1.0)).sqrt()
}

fn sum_azimuthal(f: &[C64], phi: f64) -> f64 {
    let step = C64::from_polar(1.0, phi);
    let mut e = step;
    let mut acc = f[0].re;
    for fq in &f[1..] {
        acc += 2.0 * (fq * e).re;
        e *= step;
    }
    acc
}

/// `W(θ, φ)` at one point.
pub fn wigner_at(m: &MultipoleDecomposition, theta: f64, phi: f64) -> f64 {
    prefactor(m) * sum_azimuthal(&azimuthal_coefficients(m, theta.cos()), phi)
}

/// Wigner function sampled on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct WignerField {
    pub n_parties: u32,
    pub grid: SphereGrid,
    /// Row-major: `values[i·n_phi + l] = W(θ_i, φ_l)`.
    pub values: Vec<f64>,
}

impl WignerField {
    pub fn get(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.grid.n_phi() + l]
    }

    /// `(θ, φ, W)` triples in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let np = self.grid.n_phi();
        self.values
            .iter()
            .enumerate()
            .map(move |(idx, w)| (self.grid.theta[idx / np], self.grid.phi[idx % np], *w))
    }

    fn scale(&self) -> f64 {
        (self.n_parties as f64 + 1.0) / (4.0 * PI)
    }

    /// `(2j+1)/(4π) ∫ W dΩ`, equal to one for any unit-trace state.
    pub fn normalization(&self) -> f64 {
        self.scale() * self.grid.integrate(&self.values)
    }

    /// `½((2j+1)/(4π) ∫ |W| dΩ − 1)` on this grid alone.
    pub fn negativity(&self) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|w| w.abs()).collect();
        0.5 * (self.scale() * self.grid.integrate(&abs) - 1.0)
    }

    /// Grid point with the largest value, as `(θ, φ, W)`.
    pub fn maximum(&self) -> (f64, f64, f64) {
        self.rows().fold((0.0, 0.0, f64::NEG_INFINITY), |best, r| {
            if r.2 > best.2 {
                r
            } else {
                best
            }
        })
    }
}

/// Samples `W` at every node of `grid`.
pub fn wigner_function(m: &MultipoleDecomposition, grid: &SphereGrid) -> WignerField {
    let c = prefactor(m);
    let kmax = m.max_rank();
    // e^{iqφ_l} for every azimuth, reused across polar rows.
    let phases: Vec<Vec<C64>> = grid
        .phi
        .iter()
        .map(|p| {
            (0..=kmax)
                .map(|q| C64::from_polar(1.0, q as f64 * p))
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(grid.n_theta() * grid.n_phi());
    for th in &grid.theta {
        let f = azimuthal_coefficients(m, th.cos());
        for ph in &phases {
            let mut acc = f[0].re;
            for q in 1..=kmax {
                acc += 2.0 * (f[q] * ph[q]).re;
            }
            values.push(c * acc);
        }
    }
    WignerField {
        n_parties: m.n_parties,
        grid: grid.clone(),
        values,
    }
}

/// Converged negativity and the grid it was reached on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerNegativity {
    pub value: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub doublings: usize,
    /// Change against the previous grid.
    pub change: f64,
}

/// Negativity, doubling `grid` until two successive values agree within
/// [`REFINE_TOL`].
pub fn wigner_negativity(
    m: &MultipoleDecomposition,
    grid: &SphereGrid,
) -> Result<WignerNegativity> {
    let mut g = grid.clone();
    let mut prev = wigner_function(m, &g).negativity();
    let mut change = f64::INFINITY;
    for doublings in 1..=MAX_DOUBLINGS {
        g = g.doubled()?;
        let v = wigner_function(m, &g).negativity();
        change = (v - prev).abs();
        if change < REFINE_TOL {
            return Ok(WignerNegativity {
                value: v,
                n_theta: g.n_theta(),
                n_phi: g.n_phi(),
                doublings,
                change,
            });
        }
        prev = v;
    }
    Err(PibiError::NonConvergence {
        doublings: MAX_DOUBLINGS,
        change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_harmonics() {
        let x = 0.3f64;
        let s = (1.0 - x * x).sqrt();
        let p0 = normalized_legendre(2, 0, x);
        assert!((p0[0] - (0.25 / PI).sqrt()).abs() < 1e-15);
        assert!((p0[1] - (3.0 / (4.0 * PI)).sqrt() * x).abs() < 1e-15);
        assert!((p0[2] - (5.0 / (16.0 * PI)).sqrt() * (3.0 * x * x - 1.0)).abs() < 1e-15);
        let p1 = normalized_legendre(2, 1, x);
        assert!((p1[0] + (3.0 / (8.0 * PI)).sqrt() * s).abs() < 1e-15);
        assert!((p1[1] + (15.0 / (8.0 * PI)).sqrt() * s * x).abs() < 1e-15);
    }

    #[test]
    fn grid_integrates_harmonic_products_exactly() {
        let j2 = 6usize;
        let g = SphereGrid::for_parties(j2 as u32);
        for q in 0..=j2 {
            for q2 in 0..=j2 {
                let lq = |x: f64| normalized_legendre(j2, q, x);
                let lq2 = |x: f64| normalized_legendre(j2, q2, x);
                for k in q..=j2 {
                    for k2 in q2..=j2 {
                        // ∫ Y_kq conj(Y_k2q2) dΩ = δ_kk2 δ_qq2
                        let mut acc = C64::new(0.0, 0.0);
                        for (i, th) in g.theta.iter().enumerate() {
                            let x = th.cos();
                            let a = lq(x)[k - q] * lq2(x)[k2 - q2];
                            for p in &g.phi {
                                acc += C64::from_polar(
                                    g.weights[i] * a * 2.0 * PI / g.n_phi() as f64,
                                    (q as f64 - q2 as f64) * p,
                                );
                            }
                        }
                        let want = if k == k2 && q == q2 { 1.0 } else { 0.0 };
                        assert!(
                            (acc - C64::new(want, 0.0)).norm() < 1e-10,
                            "({k},{q}) ({k2},{q2}): {acc}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn doubling_keeps_nodes_ordered() {
        let g = SphereGrid::new(5, 7).unwrap().doubled().unwrap();
        assert_eq!((g.n_theta(), g.n_phi()), (10, 14));
        assert!(g.theta.windows(2).all(|w| w[0] < w[1]));
        assert!((g.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}
