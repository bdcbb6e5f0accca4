//! A minimal conic-program description and the Clarabel adapter.
//!
//! Problems are stated in the standard form
//! `min qᵀx  s.t.  A x + s = b,  s ∈ K`, with `K` a product of zero,
//! nonnegative and PSD-triangle cones. The PSD cones use the scaled upper
//! triangle stored column by column, off-diagonals multiplied by `√2`.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
// Links the system BLAS/LAPACK that Clarabel's SDP support calls into.
use openblas_src as _;

use crate::error::{PibiError, Result};

/// Environment variable overriding the solver accuracy.
pub const ACCURACY_ENV: &str = "PIBI_SDP_ACCURACY";
/// When set, the solver prints its iteration log to stdout.
pub const VERBOSE_ENV: &str = "PIBI_SDP_VERBOSE";
/// Default gap and feasibility tolerance.
pub const DEFAULT_ACCURACY: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    Zero(usize),
    Nonnegative(usize),
    /// Side length of a symmetric PSD block.
    PsdTriangle(usize),
}

impl Cone {
    pub fn rows(self) -> usize {
        match self {
            Cone::Zero(k) | Cone::Nonnegative(k) => k,
            Cone::PsdTriangle(n) => n * (n + 1) / 2,
        }
    }
}

/// Sparse rows of `A` paired with `b`, grouped by cone in order.
#[derive(Clone, Debug, Default)]
pub struct ConicProblem {
    pub n_vars: usize,
    pub q: Vec<f64>,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
    pub cones: Vec<Cone>,
}

impl ConicProblem {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            q: vec![0.0; n_vars],
            ..Default::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<(usize, f64)>, b: f64) {
        self.rows.push(row);
        self.b.push(b);
    }

    fn check(&self) -> Result<()> {
        let expected: usize = self.cones.iter().map(|c| c.rows()).sum();
        if expected != self.rows.len() || self.q.len() != self.n_vars {
            return Err(PibiError::InvalidInput(format!(
                "conic problem has {} rows for cones needing {expected}",
                self.rows.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub x: Vec<f64>,
    /// Dual variables, one per row, in the dual cone.
    pub z: Vec<f64>,
    pub primal_objective: f64,
    pub status: String,
}

/// Anything that can solve a [`ConicProblem`].
pub trait ConicBackend {
    fn solve(&self, problem: &ConicProblem) -> Result<ConicSolution>;
}

/// Interior-point solver from the `clarabel` crate.
#[derive(Clone, Copy, Debug)]
pub struct ClarabelBackend {
    pub accuracy: f64,
    pub max_iter: u32,
    /// The moment programs stall one step short of full accuracy with the
    /// solver's default of `1e−8`; `1e−7` lets them converge.
    pub static_regularization: f64,
}

impl Default for ClarabelBackend {
    fn default() -> Self {
        Self {
            accuracy: DEFAULT_ACCURACY,
            max_iter: 200,
            static_regularization: 1e-7,
        }
    }
}

impl ClarabelBackend {
    /// Default settings, with the accuracy taken from [`ACCURACY_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Self::default();
        if let Ok(v) = std::env::var(ACCURACY_ENV) {
            b.accuracy = v
                .parse::<f64>()
                .ok()
                .filter(|a| *a > 0.0 && a.is_finite())
                .ok_or_else(|| PibiError::Parse {
                    what: ACCURACY_ENV,
                    detail: v.clone(),
                })?;
        }
        Ok(b)
    }
}

impl ConicBackend for ClarabelBackend {
    fn solve(&self, p: &ConicProblem) -> Result<ConicSolution> {
        p.check()?;
        let (mut ri, mut ci, mut vals) = (Vec::new(), Vec::new(), Vec::new());
        for (r, row) in p.rows.iter().enumerate() {
            for &(c, v) in row {
                ri.push(r);
                ci.push(c);
                vals.push(v);
            }
        }
        let a = CscMatrix::new_from_triplets(p.rows.len(), p.n_vars, ri, ci, vals);
        let pm = CscMatrix::zeros((p.n_vars, p.n_vars));
        let cones: Vec<SupportedConeT<f64>> = p
            .cones
            .iter()
            .map(|c| match *c {
                Cone::Zero(k) => SupportedConeT::ZeroConeT(k),
                Cone::Nonnegative(k) => SupportedConeT::NonnegativeConeT(k),
                Cone::PsdTriangle(n) => SupportedConeT::PSDTriangleConeT(n),
            })
            .collect();
        let settings = DefaultSettingsBuilder::default()
            .verbose(std::env::var_os(VERBOSE_ENV).is_some())
            .max_iter(self.max_iter)
            .tol_gap_abs(self.accuracy)
            .tol_gap_rel(self.accuracy)
            .tol_feas(self.accuracy)
            .static_regularization_constant(self.static_regularization)
            .build()
            .map_err(|e| PibiError::SolverFailure(e.to_string()))?;
        let mut solver = DefaultSolver::new(&pm, &p.q, &a, &p.b, &cones, settings)
            .map_err(|e| PibiError::SolverFailure(e.to_string()))?;
        solver.solve();
        let sol = &solver.solution;
        let status = format!("{:?}", sol.status);
        match sol.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => Ok(ConicSolution {
                x: sol.x.clone(),
                z: sol.z.clone(),
                primal_objective: sol.obj_val,
                status,
            }),
            _ => Err(PibiError::SolverFailure(status)),
        }
    }
}

/// Positions `(r, c)` and scale factors of the svec entries of an `n × n`
/// block, in the order the PSD cone expects.
pub fn svec_order(n: usize) -> impl Iterator<Item = (usize, usize, f64)> {
    (0..n).flat_map(move |c| {
        (0..=c).map(move |r| {
            (
                r,
                c,
                if r == c {
                    1.0
                } else {
                    std::f64::consts::SQRT_2
                },
            )
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sdp() {
        // min x  s.t. [[x, 1], [1, 1]] ⪰ 0  ⇒  x* = 1
        let mut p = ConicProblem::new(1);
        p.q[0] = 1.0;
        for (r, c, s) in svec_order(2) {
            match (r, c) {
                (0, 0) => p.push_row(vec![(0, -s)], 0.0),
                (0, 1) => p.push_row(vec![], s),
                _ => p.push_row(vec![], s),
            }
        }
        p.cones.push(Cone::PsdTriangle(2));
        let sol = ClarabelBackend::default().solve(&p).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-6, "{sol:?}");
    }

    #[test]
    fn infeasible_is_reported() {
        // x = 1 and x = 2
        let mut p = ConicProblem::new(1);
        p.push_row(vec![(0, 1.0)], 1.0);
        p.push_row(vec![(0, 1.0)], 2.0);
        p.cones.push(Cone::Zero(2));
        assert!(matches!(
            ClarabelBackend::default().solve(&p),
            Err(PibiError::SolverFailure(_))
        ));
    }

    #[test]
    fn rejects_mismatched_cones() {
        let mut p = ConicProblem::new(1);
        p.push_row(vec![(0, 1.0)], 1.0);
        p.cones.push(Cone::Zero(2));
        assert!(ClarabelBackend::default().solve(&p).is_err());
    }
}
