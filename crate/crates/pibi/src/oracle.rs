//! Full `2^N`-dimensional Bell operators, used to validate the symmetric-block
//! shortcut at small `N`.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::dicke::Direction;
use crate::error::{PibiError, Result};
use crate::family::InequalityFamily;
use crate::label::CorrelatorLabel;
use crate::linalg::hermitian_eigenvalues;

/// Largest party number the oracle accepts.
pub const ORACLE_LIMIT: u32 = 10;

fn pauli_along(u: &Direction) -> [[C64; 2]; 2] {
    [
        [C64::new(u.z, 0.0), C64::new(u.x, -u.y)],
        [C64::new(u.x, u.y), C64::new(-u.z, 0.0)],
    ]
}

fn kron_site(a: &Mat<C64>, site: &[[C64; 2]; 2]) -> Mat<C64> {
    let d = a.nrows();
    Mat::from_fn(2 * d, 2 * d, |i, j| a[(i / 2, j / 2)] * site[i % 2][j % 2])
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Sums over sets of sites, `E[a][b]` = all ways of placing `a` copies of
/// `M0` and `b` copies of `M1` on distinct sites. Ordered-tuple correlators
/// are `a! b! E[a][b]`.
fn elementary_sums(
    n: u32,
    k: u8,
    m0: &[[C64; 2]; 2],
    m1: &[[C64; 2]; 2],
) -> Vec<Vec<Option<Mat<C64>>>> {
    let k = k as usize;
    let id = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let mut e: Vec<Vec<Option<Mat<C64>>>> = vec![vec![None; k + 1]; k + 1];
    e[0][0] = Some(Mat::from_fn(1, 1, |_, _| C64::new(1.0, 0.0)));
    for _ in 0..n {
        let mut next: Vec<Vec<Option<Mat<C64>>>> = vec![vec![None; k + 1]; k + 1];
        for a in 0..=k {
            for b in 0..=k - a {
                let mut acc: Option<Mat<C64>> = e[a][b].as_ref().map(|m| kron_site(m, &id));
                let mut add = |m: Mat<C64>| {
                    acc = Some(match acc.take() {
                        Some(x) => x + m,
                        None => m,
                    })
                };
                if a > 0 {
                    if let Some(m) = &e[a - 1][b] {
                        add(kron_site(m, m0));
                    }
                }
                if b > 0 {
                    if let Some(m) = &e[a][b - 1] {
                        add(kron_site(m, m1));
                    }
                }
                next[a][b] = acc;
            }
        }
        e = next;
    }
    e
}

/// The full Bell operator `constant·1 + Σ_w c_w Σ_{tuples} ⊗ M_{w_i}`.
pub fn full_bell_operator(
    f: &InequalityFamily,
    n_parties: u32,
    n: &Direction,
    m: &Direction,
) -> Result<Mat<C64>> {
    if n_parties > ORACLE_LIMIT {
        return Err(PibiError::SizeLimit {
            what: "N (full space)",
            value: n_parties as usize,
            limit: ORACLE_LIMIT as usize,
        });
    }
    let dim = 1usize << n_parties;
    let e = elementary_sums(n_parties, f.max_order, &pauli_along(n), &pauli_along(m));
    let mut out = Mat::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(f.constant_f64(n_parties), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    for l in f.coeffs.keys() {
        let (a, b) = (l.zeros() as usize, l.ones() as usize);
        if let Some(m) = &e[a][b] {
            let k = f.coeff_f64(*l, n_parties) * factorial(a as u32) * factorial(b as u32);
            out += m * faer::Scale(C64::new(k, 0.0));
        }
    }
    Ok(out)
}

/// Ordered-tuple correlator operator on the full space.
pub fn full_correlator_operator(
    l: CorrelatorLabel,
    n_parties: u32,
    n: &Direction,
    m: &Direction,
) -> Result<Mat<C64>> {
    if n_parties > ORACLE_LIMIT {
        return Err(PibiError::SizeLimit {
            what: "N (full space)",
            value: n_parties as usize,
            limit: ORACLE_LIMIT as usize,
        });
    }
    let e = elementary_sums(n_parties, l.order(), &pauli_along(n), &pauli_along(m));
    let (a, b) = (l.zeros() as usize, l.ones() as usize);
    let dim = 1usize << n_parties;
    Ok(match &e[a][b] {
        Some(x) => x * faer::Scale(C64::new(factorial(a as u32) * factorial(b as u32), 0.0)),
        None => Mat::zeros(dim, dim),
    })
}

/// Minimum eigenvalue of the full Bell operator.
pub fn full_space_oracle(
    f: &InequalityFamily,
    n_parties: u32,
    n: &Direction,
    m: &Direction,
) -> Result<f64> {
    let op = full_bell_operator(f, n_parties, n, m)?;
    Ok(hermitian_eigenvalues(&op)?[0])
}

/// Isometry from the Dicke basis (index = excitations) into the full space,
/// with `|0⟩` the `σ_z = +1` state of each qubit.
pub fn symmetric_embedding(n_parties: u32) -> Mat<f64> {
    let dim = 1usize << n_parties;
    let binom = |k: u32| -> f64 {
        (0..k)
            .map(|i| (n_parties - i) as f64 / (i + 1) as f64)
            .product()
    };
    Mat::from_fn(dim, n_parties as usize + 1, |i, k| {
        if (i as u64).count_ones() == k as u32 {
            1.0 / binom(k as u32).sqrt()
        } else {
            0.0
        }
    })
}
