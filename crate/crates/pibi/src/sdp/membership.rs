//! Membership of a correlator point in the moment relaxation, dual
//! certificates, and the searches over directions and third-moment weights.

use std::f64::consts::PI;

use serde::Serialize;

use super::backend::{svec_order, ClarabelBackend, Cone, ConicBackend, ConicProblem};
use super::moment::{basis_labels, MomentMatrixSpec, BASIS_LEN, BLOCKS};
use super::reduce::ReducedPolynomial;
use crate::correlator::{eval_partition_correlators, CorrelatorVector, Partition};
use crate::dicke::Direction;
use crate::error::{PibiError, Result};
use crate::label::CorrelatorLabel;
use crate::oat::{
    correlator_point, directions_from_angles, optimize_angles, AngleSearch, OatParams,
};
use crate::optim::{golden_section, halton, nelder_mead, NelderMeadOptions};

/// Upper bound on `λ`, keeping the program bounded for interior points.
pub const LAMBDA_CAP: f64 = 2.0;
/// A point counts as nonlocal only if `λ* < 1 − NONLOCAL_TOL`.
pub const NONLOCAL_TOL: f64 = 1e-6;
/// Largest violation by a classical vertex tolerated in a certificate.
pub const CERTIFICATE_TOL: f64 = 1e-7;

/// Unit weights `(α, β)` of the combined direction `a = α m + β n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThirdMomentWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl ThirdMomentWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let norm = alpha.hypot(beta);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(PibiError::InvalidInput(format!(
                "α² + β² = {} ≠ 1",
                norm * norm
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_gamma(gamma: f64) -> Self {
        Self {
            alpha: gamma.sin(),
            beta: gamma.cos(),
        }
    }

    /// Weights of `S_000, S_001, S_011, S_111` in `⟨S_a³⟩`.
    pub fn weights(&self) -> [f64; 4] {
        let (a, b) = (self.alpha, self.beta);
        [b * b * b, 3.0 * a * b * b, 3.0 * a * a * b, a * a * a]
    }

    pub fn ratio(&self) -> f64 {
        self.alpha / self.beta
    }
}

/// One equality `Σ_k w_k Γ_0[0, k] = λ Σ_k w_k x*_k`; `k` indexes the basis
/// labels `0, 1, 00, …, 111`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstRowConstraint {
    pub weights: Vec<(usize, f64)>,
}

fn plain_constraints() -> Vec<FirstRowConstraint> {
    (0..BASIS_LEN - 1)
        .map(|k| FirstRowConstraint {
            weights: vec![(k, 1.0)],
        })
        .collect()
}

fn combined_constraints(w: &ThirdMomentWeights) -> Vec<FirstRowConstraint> {
    let mut out: Vec<FirstRowConstraint> = (0..5)
        .map(|k| FirstRowConstraint {
            weights: vec![(k, 1.0)],
        })
        .collect();
    out.push(FirstRowConstraint {
        weights: w
            .weights()
            .iter()
            .enumerate()
            .map(|(i, &x)| (5 + i, x))
            .collect(),
    });
    out
}

/// Primal value and dual data of one membership program.
#[derive(Clone, Debug)]
pub struct MembershipOutcome {
    pub n_parties: u32,
    pub lambda_star: f64,
    pub constraints: Vec<FirstRowConstraint>,
    /// Dual multiplier of each constraint.
    pub duals: Vec<f64>,
    /// `Σ ⟨Z_i, Γ_i(const)⟩ − Σ_r z_r L_r(const)`; equals `λ*` at optimality.
    pub c0: f64,
    pub weights: Option<ThirdMomentWeights>,
    pub point: CorrelatorVector<f64>,
    pub status: String,
}

impl MembershipOutcome {
    pub fn is_nonlocal(&self) -> bool {
        self.lambda_star < 1.0 - NONLOCAL_TOL
    }
}

fn solve_membership(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
    constraints: Vec<FirstRowConstraint>,
    weights: Option<ThirdMomentWeights>,
    backend: &dyn ConicBackend,
) -> Result<MembershipOutcome> {
    if point.n_parties != spec.n_parties {
        return Err(PibiError::InvalidInput(format!(
            "point has N={} but the spec N={}",
            point.n_parties, spec.n_parties
        )));
    }
    let target = spec.scaled_point(point)?;
    let m = spec.monomials.len();
    let lam = m;
    let mut p = ConicProblem::new(m + 1);
    p.q[lam] = -1.0;
    for c in &constraints {
        let mut lhs = ReducedPolynomial::zero();
        let mut t = 0.0;
        for &(k, w) in &c.weights {
            lhs = &lhs + &spec.basis[k + 1].scale(w);
            t += w * target[k];
        }
        let (k0, mut row) = spec.linearize(&lhs);
        row.push((lam, -t));
        p.push_row(row, -k0);
    }
    p.cones.push(Cone::Zero(constraints.len()));
    p.push_row(vec![(lam, 1.0)], LAMBDA_CAP);
    p.cones.push(Cone::Nonnegative(1));
    for block in 0..BLOCKS {
        for (r, c, s) in svec_order(BASIS_LEN) {
            let (k0, row) = spec.linearize(spec.entry(block, r, c));
            p.push_row(row.into_iter().map(|(i, v)| (i, -s * v)).collect(), s * k0);
        }
        p.cones.push(Cone::PsdTriangle(BASIS_LEN));
    }
    let sol = backend.solve(&p)?;
    let nz = constraints.len();
    let c0 = sol
        .z
        .iter()
        .zip(&p.b)
        .enumerate()
        .filter(|(i, _)| *i != nz)
        .map(|(_, (z, b))| z * b)
        .sum();
    Ok(MembershipOutcome {
        n_parties: spec.n_parties,
        lambda_star: sol.x[lam],
        duals: sol.z[..nz].to_vec(),
        constraints,
        c0,
        weights,
        point: point.truncated(3),
        status: sol.status,
    })
}

/// `max λ` such that `λ·x*` lies in the relaxation, capped at [`LAMBDA_CAP`].
pub fn membership_sdp(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
) -> Result<MembershipOutcome> {
    membership_sdp_with(spec, point, &ClarabelBackend::from_env()?)
}

pub fn membership_sdp_with(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
    backend: &dyn ConicBackend,
) -> Result<MembershipOutcome> {
    solve_membership(spec, point, plain_constraints(), None, backend)
}

/// Membership with the four third-order constraints replaced by the single
/// combination measured by `⟨S_a³⟩`.
pub fn constrained_membership_sdp(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
    weights: ThirdMomentWeights,
) -> Result<MembershipOutcome> {
    constrained_membership_sdp_with(spec, point, weights, &ClarabelBackend::from_env()?)
}

pub fn constrained_membership_sdp_with(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
    weights: ThirdMomentWeights,
    backend: &dyn ConicBackend,
) -> Result<MembershipOutcome> {
    solve_membership(
        spec,
        point,
        combined_constraints(&weights),
        Some(weights),
        backend,
    )
}

/// `coefficient · Σ_w weight_w S_w`, in raw correlator units.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateTerm {
    pub coefficient: f64,
    pub weights: Vec<(CorrelatorLabel, f64)>,
}

/// A Bell inequality `1 + Σ_t c_t (Σ_w w S_w) ≥ 0` read off the dual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub n_parties: u32,
    pub lambda_star: f64,
    pub constant: f64,
    pub terms: Vec<CertificateTerm>,
    pub weights: Option<ThirdMomentWeights>,
    pub point: CorrelatorVector<f64>,
    pub value_at_point: f64,
    pub min_vertex_value: f64,
}

impl Certificate {
    /// `(c_0, c_1, …)` with `c_0 = 1`.
    pub fn coefficients(&self) -> Vec<f64> {
        std::iter::once(self.constant)
            .chain(self.terms.iter().map(|t| t.coefficient))
            .collect()
    }

    /// Per-label coefficients, with combined terms expanded.
    pub fn label_coefficients(&self) -> Vec<(CorrelatorLabel, f64)> {
        let mut out: Vec<(CorrelatorLabel, f64)> = Vec::new();
        for t in &self.terms {
            for &(l, w) in &t.weights {
                match out.iter_mut().find(|(x, _)| *x == l) {
                    Some(e) => e.1 += t.coefficient * w,
                    None => out.push((l, t.coefficient * w)),
                }
            }
        }
        out
    }

    pub fn eval(&self, v: &CorrelatorVector<f64>) -> Result<f64> {
        let mut acc = self.constant;
        for (l, k) in self.label_coefficients() {
            acc += k * v
                .get(l)
                .ok_or_else(|| PibiError::MissingCorrelator(l.to_string()))?;
        }
        Ok(acc)
    }

    pub fn eval_partition(&self, p: Partition) -> f64 {
        self.eval(&eval_partition_correlators(p, 3).to_f64())
            .expect("complete third-order vector")
    }

    /// The combined coefficient re-expressed for unnormalized weights
    /// proportional to `(α, β)` with `β` scaled to `beta_scale`.
    pub fn combined_coefficient_rescaled(&self, beta_scale: f64) -> Option<f64> {
        let w = self.weights?;
        let last = self.terms.last()?.coefficient;
        Some(last * (w.alpha.hypot(w.beta) * beta_scale / w.beta).abs().powi(3))
    }
}

/// Normalizes the dual to `c_0 = 1`, maps it to raw correlator units and
/// checks it on every classical vertex.
pub fn extract_certificate(outcome: &MembershipOutcome) -> Result<Certificate> {
    if !outcome.is_nonlocal() {
        return Err(PibiError::NoViolationFound);
    }
    let n = outcome.n_parties as f64;
    let labels = basis_labels();
    let terms = outcome
        .constraints
        .iter()
        .zip(&outcome.duals)
        .map(|(c, z)| {
            let order = labels[c.weights[0].0].order();
            CertificateTerm {
                coefficient: z / (outcome.c0 * n.powi(order as i32)),
                weights: c.weights.iter().map(|&(k, w)| (labels[k], w)).collect(),
            }
        })
        .collect();
    let mut cert = Certificate {
        n_parties: outcome.n_parties,
        lambda_star: outcome.lambda_star,
        constant: 1.0,
        terms,
        weights: outcome.weights,
        point: outcome.point.clone(),
        value_at_point: f64::NAN,
        min_vertex_value: f64::INFINITY,
    };
    cert.value_at_point = cert.eval(&outcome.point)?;
    cert.min_vertex_value = Partition::all(outcome.n_parties)
        .map(|p| cert.eval_partition(p))
        .fold(f64::INFINITY, f64::min);
    if cert.min_vertex_value < -CERTIFICATE_TOL {
        return Err(PibiError::InvalidCertificate(cert.min_vertex_value));
    }
    Ok(cert)
}

/// Best weights found by [`optimize_alpha_beta`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaBetaOptimum {
    pub gamma: f64,
    pub weights: ThirdMomentWeights,
    pub lambda_star: f64,
}

/// Minimizes the constrained `λ*` over `(α, β) = (sin γ, cos γ)`,
/// `γ ∈ [0, π)`: a grid followed by golden-section refinement.
pub fn optimize_alpha_beta(
    spec: &MomentMatrixSpec,
    point: &CorrelatorVector<f64>,
    grid: usize,
) -> Result<AlphaBetaOptimum> {
    let backend = ClarabelBackend::from_env()?;
    let lam = |g: f64| -> Result<f64> {
        Ok(constrained_membership_sdp_with(
            spec,
            point,
            ThirdMomentWeights::from_gamma(g),
            &backend,
        )?
        .lambda_star)
    };
    let grid = grid.max(3);
    let step = PI / grid as f64;
    let mut values = Vec::with_capacity(grid);
    for i in 0..grid {
        values.push(lam(step * i as f64)?);
    }
    let best_i = (0..grid)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty grid");
    let (lo, hi) = (step * (best_i as f64 - 1.0), step * (best_i as f64 + 1.0));
    let (g, v) = golden_section(
        |g| lam(g.rem_euclid(PI)).unwrap_or(f64::INFINITY),
        lo,
        hi,
        1e-6,
    );
    let (gamma, lambda_star) = if v < values[best_i] {
        (g.rem_euclid(PI), v)
    } else {
        (step * best_i as f64, values[best_i])
    };
    Ok(AlphaBetaOptimum {
        gamma,
        weights: ThirdMomentWeights::from_gamma(gamma),
        lambda_star,
    })
}

/// Most nonlocal direction pair found for an OAT state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionOptimum {
    pub angles: [f64; 4],
    pub n: Direction,
    pub m: Direction,
    pub point: CorrelatorVector<f64>,
    pub lambda_star: f64,
}

/// Settings for [`optimize_directions`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionSearch {
    /// Quasi-random starts added to the Bell-optimal seeds.
    pub extra_starts: usize,
    pub max_evals: usize,
}

impl Default for DirectionSearch {
    fn default() -> Self {
        Self {
            extra_starts: 2,
            max_evals: 400,
        }
    }
}

/// Angles of `−u`.
fn antipode(phi: f64, theta: f64) -> (f64, f64) {
    (phi + PI, PI - theta)
}

/// Puts a direction pair into the canonical frame: setting 0 carries the
/// larger `|S_0|`, and the outcomes of each setting are flipped so that
/// `S_0 ≤ 0 ≤ S_1`. These moves are symmetries of the local polytope,
/// so `λ*` is unchanged.
pub fn canonical_angles(n_parties: u32, mu: f64, angles: [f64; 4]) -> [f64; 4] {
    let (n, m) = directions_from_angles(&angles);
    let v = correlator_point(n_parties, mu, &n, &m, 1);
    let (s0, s1) = (v.values()[0], v.values()[1]);
    let swap = s1.abs() > s0.abs();
    let lead = if swap { s1 } else { s0 };
    let mut a = if swap {
        [angles[2], angles[3], angles[0], angles[1]]
    } else {
        angles
    };
    let trail = if swap { s0 } else { s1 };
    if lead > 0.0 {
        (a[0], a[1]) = antipode(a[0], a[1]);
    }
    if trail < 0.0 {
        (a[2], a[3]) = antipode(a[2], a[3]);
    }
    a.map(|x| x.rem_euclid(2.0 * PI))
}

/// Outer search over four measurement angles, inner membership SDP. Seeds
/// are the Bell-optimal angles of the third- and second-order families.
pub fn optimize_directions(
    n_parties: u32,
    mu: f64,
    search: &DirectionSearch,
) -> Result<DirectionOptimum> {
    let spec = MomentMatrixSpec::build(n_parties)?;
    let backend = ClarabelBackend::from_env()?;
    let params = OatParams::new(n_parties, mu, 1.0)?;
    let lam = |a: &[f64]| -> f64 {
        let (n, m) = directions_from_angles(&[a[0], a[1], a[2], a[3]]);
        let point = correlator_point(n_parties, mu, &n, &m, 3);
        membership_sdp_with(&spec, &point, &backend)
            .map(|o| o.lambda_star)
            .unwrap_or(f64::INFINITY)
    };
    let quick = AngleSearch {
        starts: 8,
        ..Default::default()
    };
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for name in ["I3", "I2"] {
        starts.push(
            optimize_angles(&crate::catalog::family(name), params, &quick)
                .angles
                .to_vec(),
        );
    }
    for i in 1..=search.extra_starts {
        let h = halton(i, 4);
        starts.push(vec![2.0 * PI * h[0], PI * h[1], 2.0 * PI * h[2], PI * h[3]]);
    }
    let opts = NelderMeadOptions {
        initial_step: 0.1,
        f_tol: 1e-7,
        x_tol: 1e-5,
        max_evals: search.max_evals,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in starts {
        let r = nelder_mead(lam, &s, opts);
        if best.as_ref().map_or(true, |b| r.value < b.1) {
            best = Some((r.x, r.value));
        }
    }
    let (x, _) = best.expect("at least one start");
    let angles = canonical_angles(n_parties, mu, [x[0], x[1], x[2], x[3]]);
    let (n, m) = directions_from_angles(&angles);
    let point = correlator_point(n_parties, mu, &n, &m, 3);
    let lambda_star = membership_sdp_with(&spec, &point, &backend)?.lambda_star;
    if lambda_star >= 1.0 - NONLOCAL_TOL {
        return Err(PibiError::NoViolationFound);
    }
    Ok(DirectionOptimum {
        angles,
        n,
        m,
        point,
        lambda_star,
    })
}
