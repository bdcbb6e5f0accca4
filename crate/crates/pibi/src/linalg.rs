//! Banded complex matrices and the eigenvalue routines built on them.
//!
//! Every operator in the symmetric subspace is a polynomial of degree at most
//! four in two tridiagonal spin matrices, so it has half-bandwidth at most
//! four. Products and sums are done in band storage; eigenproblems either go
//! through a dense faer solve or, for real matrices, a band reduction to
//! tridiagonal form followed by Sturm bisection.

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::error::{PibiError, Result};

/// Square complex matrix with entries only on diagonals `-w..=w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Banded {
    n: usize,
    w: usize,
    /// `diags[off + w][i] = A[i][i + off]`; slots falling outside are zero.
    diags: Vec<Vec<C64>>,
}

impl Banded {
    pub fn zeros(n: usize, w: usize) -> Self {
        let w = w.min(n.saturating_sub(1));
        Self {
            n,
            w,
            diags: vec![vec![C64::new(0.0, 0.0); n]; 2 * w + 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0);
        m.diags[0].fill(C64::new(1.0, 0.0));
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), 0);
        for (slot, &v) in m.diags[0].iter_mut().zip(values) {
            *slot = C64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.w
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let off = j as isize - i as isize;
        if off.unsigned_abs() > self.w {
            return C64::new(0.0, 0.0);
        }
        self.diags[(off + self.w as isize) as usize][i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let off = j as isize - i as isize;
        assert!(
            off.unsigned_abs() <= self.w,
            "entry ({i},{j}) outside band {}",
            self.w
        );
        self.diags[(off + self.w as isize) as usize][i] = v;
    }

    fn widened(&self, w: usize) -> Self {
        if w <= self.w {
            return self.clone();
        }
        let mut out = Self::zeros(self.n, w);
        let shift = out.w - self.w;
        for (d, diag) in self.diags.iter().enumerate() {
            out.diags[d + shift].clone_from(diag);
        }
        out
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Banded, c: C64) {
        assert_eq!(self.n, other.n);
        if other.w > self.w {
            *self = self.widened(other.w);
        }
        let shift = self.w - other.w;
        for (d, diag) in other.diags.iter().enumerate() {
            for (x, y) in self.diags[d + shift].iter_mut().zip(diag) {
                *x += c * y;
            }
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        for d in &mut out.diags {
            for x in d.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Banded) -> Banded {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Banded::zeros(n, self.w + rhs.w);
        let (wa, wb, wo) = (self.w as isize, rhs.w as isize, out.w as isize);
        for i in 0..n {
            for oa in -wa..=wa {
                let k = i as isize + oa;
                if k < 0 || k >= n as isize {
                    continue;
                }
                let a = self.diags[(oa + wa) as usize][i];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for ob in -wb..=wb {
                    let j = k + ob;
                    if j < 0 || j >= n as isize || (oa + ob).abs() > wo {
                        continue;
                    }
                    out.diags[(oa + ob + wo) as usize][i] +=
                        a * rhs.diags[(ob + wb) as usize][k as usize];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let n = self.n;
        let w = self.w as isize;
        (0..n)
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for off in -w..=w {
                    let j = i as isize + off;
                    if j >= 0 && j < n as isize {
                        acc += self.diags[(off + w) as usize][i] * x[j as usize];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.diags[self.w].iter().sum()
    }

    /// `⟨x| A |x⟩`.
    pub fn expectation(&self, x: &[C64]) -> C64 {
        self.matvec(x)
            .iter()
            .zip(x)
            .map(|(ax, xi)| xi.conj() * ax)
            .sum()
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i.saturating_sub(self.w)..(i + self.w + 1).min(self.n) {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_imag(&self) -> f64 {
        self.diags
            .iter()
            .flatten()
            .fold(0.0f64, |m, z| m.max(z.im.abs()))
    }

    pub fn to_dense(&self) -> Mat<C64> {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Real part as a symmetric band, for the tridiagonal eigen path.
    pub fn to_real_symmetric(&self) -> SymBand {
        let mut b = SymBand::new(self.n, self.w);
        for i in 0..self.n {
            for j in i..(i + self.w + 1).min(self.n) {
                let v = 0.5 * (self.get(i, j).re + self.get(j, i).re);
                b.set(i, j, v);
            }
        }
        b
    }
}

/// Real symmetric band matrix with one extra diagonal of slack for bulges.
#[derive(Clone, Debug)]
pub struct SymBand {
    n: usize,
    w: usize,
    h: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn new(n: usize, w: usize) -> Self {
        let h = w + 1;
        Self {
            n,
            w,
            h,
            data: vec![0.0; n * (2 * h + 1)],
        }
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize;
        (off.unsigned_abs() <= self.h)
            .then(|| i * (2 * self.h + 1) + (off + self.h as isize) as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).expect("inside band");
        self.data[s] = v;
        let t = self.slot(j, i).expect("inside band");
        self.data[t] = v;
    }

    fn set_one(&mut self, i: usize, j: usize, v: f64) {
        match self.slot(i, j) {
            Some(s) => self.data[s] = v,
            None => debug_assert!(
                v == 0.0 || v.abs() < 1e-9 * (1.0 + self.norm_hint()),
                "fill outside slack at ({i},{j}): {v}"
            ),
        }
    }

    fn norm_hint(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Similarity transform by the Givens rotation on indices `(p, p+1)`
    /// chosen so that entry `(p+1, c)` becomes zero.
    fn rotate_out(&mut self, p: usize, c: usize) {
        let q = p + 1;
        let (x, y) = (self.get(p, c), self.get(q, c));
        if y == 0.0 {
            return;
        }
        let r = x.hypot(y);
        let (cs, sn) = (x / r, y / r);
        let lo = p.saturating_sub(self.h + 1);
        let hi = (q + self.h + 2).min(self.n);
        for j in lo..hi {
            let (a, b) = (self.get(p, j), self.get(q, j));
            self.set_one(p, j, cs * a + sn * b);
            self.set_one(q, j, -sn * a + cs * b);
        }
        for i in lo..hi {
            let (a, b) = (self.get(i, p), self.get(i, q));
            self.set_one(i, p, cs * a + sn * b);
            self.set_one(i, q, -sn * a + cs * b);
        }
        self.set_one(q, c, 0.0);
        self.set_one(c, q, 0.0);
    }

    /// Reduces to tridiagonal form, returning `(diagonal, off-diagonal)`.
    ///
    /// Column by column, the outer band entries are annihilated from the
    /// outside in; each rotation leaves one bulge `w + 1` below the diagonal,
    /// which is chased off the end of the matrix.
    pub fn tridiagonalize(mut self) -> (Vec<f64>, Vec<f64>) {
        let (n, w) = (self.n, self.w);
        if w > 1 {
            for k in 0..n.saturating_sub(2) {
                for d in (2..=w).rev() {
                    let mut r = k + d;
                    if r >= n {
                        continue;
                    }
                    let mut c = k;
                    loop {
                        self.rotate_out(r - 1, c);
                        let next = r + w;
                        if next >= n {
                            break;
                        }
                        c = r - 1;
                        r = next;
                    }
                }
            }
        }
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        let off = (0..n.saturating_sub(1))
            .map(|i| self.get(i + 1, i))
            .collect();
        (diag, off)
    }
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = d[0] - x;
    for i in 0..d.len() {
        if i > 0 {
            q = d[i] - x - e[i - 1] * e[i - 1] / q;
        }
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.
pub fn tridiagonal_min_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let radius = |i: usize| {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { e[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..n)
        .map(|i| d[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..n)
        .map(|i| d[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    while hi - lo > 4.0 * f64::EPSILON * scale {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest eigenvalue of a real symmetric band matrix.
pub fn band_min_eigenvalue(b: SymBand) -> f64 {
    let (d, e) = b.tridiagonalize();
    tridiagonal_min_eigenvalue(&d, &e)
}

/// Eigen-decomposition of a dense Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &Mat<C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| PibiError::ConvergenceFailure(format!("{e:?}")))?;
    let s = evd.S();
    let vals = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

/// Eigenvalues of a dense Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat<C64>) -> Result<Vec<f64>> {
    let vals = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| PibiError::ConvergenceFailure(format!("{e:?}")))?;
    Ok(vals)
}

/// Smallest eigenpair of a dense Hermitian matrix.
pub fn hermitian_min_eigen(m: &Mat<C64>) -> Result<(f64, Vec<C64>)> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let v = (0..m.nrows()).map(|i| vecs[(i, 0)]).collect();
    Ok((vals[0], v))
}

/// `exp(-i t H)` for Hermitian `H`, through its eigen-decomposition.
pub fn unitary_exp(h: &Mat<C64>, t: f64) -> Result<Mat<C64>> {
    let (vals, u) = hermitian_eigen(h)?;
    let n = h.nrows();
    let phases: Vec<C64> = vals.iter().map(|&l| C64::from_polar(1.0, -t * l)).collect();
    Ok(Mat::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| u[(i, k)] * phases[k] * u[(j, k)].conj())
            .sum()
    }))
}
