//! Collective spin and Bell operators in the fully symmetric subspace.
//!
//! Basis vectors are Dicke states ordered from `m = +j` down to `m = −j`, so
//! index `k` holds the state with `k` excitations and `S_z = diag(j, …, −j)`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{PibiError, Result};
use crate::family::InequalityFamily;
use crate::label::CorrelatorLabel;
use crate::linalg::{band_min_eigenvalue, hermitian_min_eigen, Banded};
use crate::optim::grid_then_golden;

/// The `(N+1)`-dimensional spin-`N/2` irrep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DickeSpace {
    pub n_parties: u32,
}

impl DickeSpace {
    pub fn new(n_parties: u32) -> Self {
        Self { n_parties }
    }

    pub fn dim(&self) -> usize {
        self.n_parties as usize + 1
    }

    pub fn j(&self) -> f64 {
        self.n_parties as f64 / 2.0
    }

    /// `m` value of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// A unit vector on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Direction {
    /// Normalizes `(x, y, z)`; fails on the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r <= 0.0 {
            return Err(PibiError::InvalidInput(format!(
                "direction ({x},{y},{z}) has no orientation"
            )));
        }
        Ok(Self {
            x: x / r,
            y: y / r,
            z: z / r,
        })
    }

    /// `(cos φ sin θ, sin φ sin θ, cos θ)`.
    pub fn from_angles(phi: f64, theta: f64) -> Self {
        Self {
            x: phi.cos() * theta.sin(),
            y: phi.sin() * theta.sin(),
            z: theta.cos(),
        }
    }

    pub fn x_axis() -> Self {
        Self {
            x: 1.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn z_axis() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    pub fn dot(&self, o: &Direction) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn neg(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `(φ, θ)` with `φ ∈ (−π, π]`.
    pub fn angles(&self) -> (f64, f64) {
        (self.y.atan2(self.x), self.z.clamp(-1.0, 1.0).acos())
    }
}

/// `S_u = u_x S_x + u_y S_y + u_z S_z` as a tridiagonal band.
pub fn spin_matrix(space: DickeSpace, u: &Direction) -> Banded {
    let d = space.dim();
    let j = space.j();
    let mut s = Banded::zeros(d, 1);
    for k in 0..d {
        s.set(k, k, C64::new(u.z * space.m(k), 0.0));
        if k + 1 < d {
            let m = space.m(k + 1);
            let ladder = (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
            // S+ sits above the diagonal: S_x carries ½, S_y carries ∓i/2.
            s.set(k, k + 1, C64::new(u.x, -u.y) * (0.5 * ladder));
            s.set(k + 1, k, C64::new(u.x, u.y) * (0.5 * ladder));
        }
    }
    s
}

/// Linear combination of products of `S_n` (letter 0) and `S_m` (letter 1).
/// The empty word is the identity.
pub type WordPoly = Vec<(f64, Vec<u8>)>;

fn all_arrangements(zeros: usize, ones: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = zeros + ones;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize == ones {
            out.push((0..total).map(|i| ((mask >> i) & 1) as u8).collect());
        }
    }
    out
}

/// Operator expression whose expectation is the correlator `label`.
///
/// These are the symmetrized-moment forms: for example
/// `Ŝ_00 = 4 S_n² − N`, `Ŝ_001 = [8 Σ_sym S_n S_n S_m + (4−6N) S_m + (8−12N) c S_n]/3`,
/// where `c = n·m`. Labels heavier in ones are the letter swap of their mirror.
pub fn correlator_expression(l: CorrelatorLabel, n_parties: u32, c: f64) -> WordPoly {
    if l.ones() > l.zeros() {
        return correlator_expression(l.swapped(), n_parties, c)
            .into_iter()
            .map(|(k, w)| (k, w.into_iter().map(|x| 1 - x).collect()))
            .collect();
    }
    let n = n_parties as f64;
    let nn = |w: &[u8]| w.to_vec();
    let sym = |zeros: usize, ones: usize, k: f64| -> WordPoly {
        all_arrangements(zeros, ones)
            .into_iter()
            .map(|w| (k, w))
            .collect()
    };
    let mut out: WordPoly = Vec::new();
    match (l.order(), l.ones()) {
        (1, 0) => out.push((2.0, nn(&[0]))),
        (2, 0) => {
            out.push((4.0, nn(&[0, 0])));
            out.push((-n, vec![]));
        }
        (2, 1) => {
            out.extend(sym(1, 1, 2.0));
            out.push((-c * n, vec![]));
        }
        (3, 0) => {
            out.push((8.0, nn(&[0, 0, 0])));
            out.push((4.0 - 6.0 * n, nn(&[0])));
        }
        (3, 1) => {
            out.extend(sym(2, 1, 8.0 / 3.0));
            out.push(((4.0 - 6.0 * n) / 3.0, nn(&[1])));
            out.push(((8.0 - 12.0 * n) * c / 3.0, nn(&[0])));
        }
        (4, 0) => {
            out.push((16.0, nn(&[0, 0, 0, 0])));
            out.push((32.0 - 24.0 * n, nn(&[0, 0])));
            out.push((3.0 * n * n - 6.0 * n, vec![]));
        }
        (4, 1) => {
            out.extend(sym(3, 1, 4.0));
            out.extend(sym(1, 1, 8.0 - 6.0 * n));
            out.push(((16.0 - 12.0 * n) * c, nn(&[0, 0])));
            out.push(((3.0 * n * n - 6.0 * n) * c, vec![]));
        }
        (4, 2) => {
            out.extend(sym(2, 2, 16.0 / 6.0));
            out.push(((32.0 - 24.0 * n) / 6.0, nn(&[0, 0])));
            out.push(((32.0 - 24.0 * n) / 6.0, nn(&[1, 1])));
            out.extend(sym(1, 1, (64.0 - 48.0 * n) * c / 6.0));
            out.push((
                (6.0 * n * n - 12.0 * n + (12.0 * n * n - 24.0 * n) * c * c) / 6.0,
                vec![],
            ));
        }
        _ => unreachable!("labels are validated at construction"),
    }
    out
}

/// Merges equal words and drops zero terms.
fn collect_words(terms: impl IntoIterator<Item = (f64, Vec<u8>)>) -> WordPoly {
    let mut map: HashMap<Vec<u8>, f64> = HashMap::new();
    for (k, w) in terms {
        *map.entry(w).or_insert(0.0) += k;
    }
    let mut out: WordPoly = map
        .into_iter()
        .filter(|(_, k)| *k != 0.0)
        .map(|(w, k)| (k, w))
        .collect();
    out.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    out
}

/// The family's Bell operator as a word polynomial, including the constant.
pub fn bell_expression(f: &InequalityFamily, n_parties: u32, c: f64) -> WordPoly {
    let coeffs: Vec<(CorrelatorLabel, f64)> = f
        .coeffs
        .keys()
        .map(|l| (*l, f.coeff_f64(*l, n_parties)))
        .collect();
    functional_expression(f.constant_f64(n_parties), &coeffs, n_parties, c)
}

/// Operator form of `constant + Σ k_w S_w` for arbitrary real coefficients.
pub fn functional_expression(
    constant: f64,
    coeffs: &[(CorrelatorLabel, f64)],
    n_parties: u32,
    c: f64,
) -> WordPoly {
    let mut terms = vec![(constant, vec![])];
    for &(l, k) in coeffs {
        terms.extend(
            correlator_expression(l, n_parties, c)
                .into_iter()
                .map(|(x, w)| (k * x, w)),
        );
    }
    collect_words(terms)
}

/// Builds word polynomials as banded matrices, caching every prefix product.
pub struct OperatorBuilder {
    letters: [Banded; 2],
    cache: HashMap<Vec<u8>, Banded>,
}

impl OperatorBuilder {
    pub fn new(space: DickeSpace, n: &Direction, m: &Direction) -> Self {
        Self {
            letters: [spin_matrix(space, n), spin_matrix(space, m)],
            cache: HashMap::new(),
        }
    }

    fn word(&mut self, w: &[u8]) -> Banded {
        if let Some(b) = self.cache.get(w) {
            return b.clone();
        }
        let out = match w.len() {
            0 => Banded::identity(self.letters[0].dim()),
            1 => self.letters[w[0] as usize].clone(),
            _ => {
                let head = self.word(&w[..w.len() - 1]);
                head.mul(&self.letters[w[w.len() - 1] as usize])
            }
        };
        self.cache.insert(w.to_vec(), out.clone());
        out
    }

    pub fn build(&mut self, poly: &WordPoly) -> Banded {
        let dim = self.letters[0].dim();
        let mut acc = Banded::zeros(dim, 0);
        for (k, w) in poly {
            let m = self.word(w);
            acc.add_scaled(&m, C64::new(*k, 0.0));
        }
        acc
    }
}

/// Symmetric-subspace operator whose expectation equals `S_label`.
pub fn correlator_operator(
    space: DickeSpace,
    l: CorrelatorLabel,
    n: &Direction,
    m: &Direction,
) -> Banded {
    OperatorBuilder::new(space, n, m).build(&correlator_expression(l, space.n_parties, n.dot(m)))
}

/// Expectations of all words of length ≤ 4 on a pure state, from the
/// vectors `w|ψ⟩` with `|w| ≤ 2`.
pub struct MomentTable {
    vecs: HashMap<Vec<u8>, Vec<C64>>,
}

impl MomentTable {
    pub fn new(space: DickeSpace, psi: &[C64], n: &Direction, m: &Direction) -> Self {
        let letters = [spin_matrix(space, n), spin_matrix(space, m)];
        let mut vecs = HashMap::new();
        vecs.insert(vec![], psi.to_vec());
        for a in 0..2u8 {
            let va = letters[a as usize].matvec(psi);
            for b in 0..2u8 {
                vecs.insert(vec![b, a], letters[b as usize].matvec(&va));
            }
            vecs.insert(vec![a], va);
        }
        Self { vecs }
    }

    /// `⟨ψ| w |ψ⟩` for a word of length at most four.
    pub fn expect(&self, w: &[u8]) -> C64 {
        assert!(w.len() <= 4, "word too long for the moment table");
        let split = w.len() / 2;
        let left: Vec<u8> = w[..split].iter().rev().copied().collect();
        let (l, r) = (&self.vecs[&left], &self.vecs[&w[split..].to_vec()]);
        l.iter().zip(r).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn eval(&self, poly: &WordPoly) -> f64 {
        poly.iter().map(|(k, w)| k * self.expect(w).re).sum()
    }
}

/// A Bell operator restricted to the symmetric subspace.
#[derive(Clone, Debug)]
pub struct BellOperatorSym {
    pub space: DickeSpace,
    pub matrix: Banded,
    pub family: String,
    pub n: Direction,
    pub m: Direction,
}

/// `constant(N)·1 + Σ_w c_w(N) Ŝ_w` for measurement directions `n`, `m`.
pub fn bell_operator(
    f: &InequalityFamily,
    space: DickeSpace,
    n: &Direction,
    m: &Direction,
) -> BellOperatorSym {
    let expr = bell_expression(f, space.n_parties, n.dot(m));
    let matrix = OperatorBuilder::new(space, n, m).build(&expr);
    BellOperatorSym {
        space,
        matrix,
        family: f.name.clone(),
        n: *n,
        m: *m,
    }
}

/// Smallest eigenvalue and a unit eigenvector (dense Hermitian solve).
pub fn min_eigenvalue(op: &BellOperatorSym) -> Result<(f64, Vec<C64>)> {
    hermitian_min_eigen(&op.matrix.to_dense())
}

/// Smallest eigenvalue only. Real operators (directions in the xz plane)
/// take the banded tridiagonal path; others fall back to the dense solve.
pub fn min_eigenvalue_only(op: &BellOperatorSym) -> Result<f64> {
    if op.matrix.max_imag() == 0.0 {
        Ok(band_min_eigenvalue(op.matrix.to_real_symmetric()))
    } else {
        min_eigenvalue(op).map(|(v, _)| v)
    }
}

/// Settings for [`optimize_theta`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaScan {
    pub grid: usize,
    pub tol: f64,
}

impl Default for ThetaScan {
    fn default() -> Self {
        Self {
            grid: 720,
            tol: 1e-8,
        }
    }
}

/// Best single-angle violation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaOptimum {
    pub theta: f64,
    pub q_v: f64,
    pub ratio: f64,
}

/// The measurement pair `M0 = σ_z`, `M1(θ) = sin θ σ_x + cos θ σ_z`.
pub fn theta_directions(theta: f64) -> (Direction, Direction) {
    (Direction::z_axis(), Direction::from_angles(0.0, theta))
}

/// `λ_min` of the family's Bell operator for the pair [`theta_directions`].
pub fn lambda_min_theta(f: &InequalityFamily, n_parties: u32, theta: f64) -> f64 {
    let (n, m) = theta_directions(theta);
    let op = bell_operator(f, DickeSpace::new(n_parties), &n, &m);
    band_min_eigenvalue(op.matrix.to_real_symmetric())
}

/// Minimizes `λ_min` over `θ ∈ [0, π]`: coarse grid, then golden section.
pub fn optimize_theta(f: &InequalityFamily, n_parties: u32, scan: ThetaScan) -> ThetaOptimum {
    let (theta, q_v) = grid_then_golden(
        |t| lambda_min_theta(f, n_parties, t),
        0.0,
        PI,
        scan.grid,
        scan.tol,
    );
    ThetaOptimum {
        theta,
        q_v,
        ratio: q_v / f.constant_f64(n_parties),
    }
}
