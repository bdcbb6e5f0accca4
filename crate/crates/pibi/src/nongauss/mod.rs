//! Non-Gaussianity of symmetric spin states: direction-optimized excess
//! kurtosis of a collective spin projection and the negativity of the spin
//! Wigner function.

pub mod cg;
pub mod multipole;
pub mod wigner;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use cg::{clebsch_gordan, clebsch_gordan_doubled};
pub use multipole::{MultipoleBasis, MultipoleDecomposition};
pub use wigner::{
    wigner_at, wigner_function, wigner_negativity, SphereGrid, WignerField, WignerNegativity,
};

use crate::dicke::{
    bell_operator, min_eigenvalue, optimize_theta, spin_matrix, theta_directions, DickeSpace,
    Direction, ThetaScan,
};
use crate::error::{PibiError, Result};
use crate::family::InequalityFamily;
use crate::optim::{nelder_mead, NelderMeadOptions};

/// Variances below this make the kurtosis undefined.
pub const VARIANCE_FLOOR: f64 = 1e-12;

fn space_of(psi: &[C64]) -> Result<DickeSpace> {
    if psi.is_empty() {
        return Err(PibiError::InvalidInput("empty state".into()));
    }
    Ok(DickeSpace::new((psi.len() - 1) as u32))
}

/// `⟨(S_u − ⟨S_u⟩)⁴⟩ / ⟨(S_u − ⟨S_u⟩)²⟩² − 3` for a normalized state.
pub fn excess_kurtosis(psi: &[C64], u: &Direction) -> Result<f64> {
    let s = spin_matrix(space_of(psi)?, u);
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mean = s.expectation(psi).re / norm;
    let centered = |v: &[C64]| -> Vec<C64> {
        s.matvec(v)
            .iter()
            .zip(v)
            .map(|(a, b)| a - b * mean)
            .collect()
    };
    let d1 = centered(psi);
    let d2 = centered(&d1);
    let m2 = d1.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm;
    let m4 = d2.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm;
    if m2 < VARIANCE_FLOOR {
        return Err(PibiError::DegenerateVariance(m2));
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Settings for [`optimize_kurtosis`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KurtosisSearch {
    /// Grid points per angle on `φ, θ ∈ [0, π]`.
    pub grid: usize,
    pub refine: bool,
}

impl Default for KurtosisSearch {
    fn default() -> Self {
        Self {
            grid: 64,
            refine: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KurtosisOptimum {
    pub phi: f64,
    pub theta: f64,
    pub direction: Direction,
    pub value: f64,
}

/// Minimal excess kurtosis over measurement directions. `S_{−u} = −S_u` has
/// the same kurtosis, so a half sphere suffices. Degenerate directions are
/// skipped.
pub fn optimize_kurtosis(psi: &[C64], search: KurtosisSearch) -> Result<KurtosisOptimum> {
    space_of(psi)?;
    let k = |phi: f64, theta: f64| {
        excess_kurtosis(psi, &Direction::from_angles(phi, theta)).unwrap_or(f64::INFINITY)
    };
    let g = search.grid.max(2);
    let mut best = (0.0, 0.0, f64::INFINITY);
    for a in 0..g {
        let phi = PI * a as f64 / g as f64;
        for b in 0..g {
            let theta = PI * b as f64 / (g - 1) as f64;
            let v = k(phi, theta);
            if v < best.2 {
                best = (phi, theta, v);
            }
        }
    }
    if !best.2.is_finite() {
        return Err(PibiError::DegenerateVariance(0.0));
    }
    if search.refine {
        let opts = NelderMeadOptions {
            initial_step: PI / g as f64,
            f_tol: 1e-12,
            x_tol: 1e-9,
            max_evals: 2000,
        };
        let m = nelder_mead(|x| k(x[0], x[1]), &[best.0, best.1], opts);
        if m.value < best.2 {
            best = (m.x[0], m.x[1], m.value);
        }
    }
    let (phi, theta, value) = best;
    Ok(KurtosisOptimum {
        phi,
        theta,
        direction: Direction::from_angles(phi, theta),
        value,
    })
}

/// Ground state of a family's Bell operator at its best single-angle
/// measurement pair.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalState {
    pub family: String,
    pub n_parties: u32,
    pub theta: f64,
    pub lambda_min: f64,
    pub ratio: f64,
    pub psi: Vec<C64>,
}

pub fn extremal_state(
    f: &InequalityFamily,
    n_parties: u32,
    scan: ThetaScan,
) -> Result<ExtremalState> {
    let opt = optimize_theta(f, n_parties, scan);
    let (n, m) = theta_directions(opt.theta);
    let (lambda_min, psi) = min_eigenvalue(&bell_operator(f, DickeSpace::new(n_parties), &n, &m))?;
    Ok(ExtremalState {
        family: f.name.clone(),
        n_parties,
        theta: opt.theta,
        lambda_min,
        ratio: lambda_min / f.constant_f64(n_parties),
        psi,
    })
}
