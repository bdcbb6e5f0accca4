//! One-axis-twisted spin states and their Bell-inequality violations.
//!
//! A coherent state along `x` evolved under `χ S_z²` for time `t` is
//! `|Φ(μ)⟩ = 2^{-N/2} Σ_k √C(N,k) e^{-i(N/2−k)² μ/2} |k⟩` with `μ = 2χt`.
//! Mixed states add white noise in the symmetric subspace:
//! `ρ(η, μ) = η |Φ⟩⟨Φ| + (1−η) 1/(N+1)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::correlator::CorrelatorVector;
use crate::dicke::{
    correlator_expression, functional_expression, DickeSpace, Direction, MomentTable,
    OperatorBuilder, WordPoly,
};
use crate::error::{PibiError, Result};
use crate::family::InequalityFamily;
use crate::label::CorrelatorLabel;
use crate::optim::{halton, multi_start, nelder_mead, NelderMeadOptions};

/// Ratios above this are not counted as violations; states on a tight face
/// of the polytope (e.g. coherent states) sit at zero up to roundoff.
pub const VIOLATION_TOL: f64 = 1e-6;

/// State parameters: party number, twisting strength `μ` and purity `η`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OatParams {
    pub n_parties: u32,
    pub mu: f64,
    pub eta: f64,
}

impl OatParams {
    pub fn new(n_parties: u32, mu: f64, eta: f64) -> Result<Self> {
        if n_parties == 0 || !(0.0..=1.0).contains(&eta) || !mu.is_finite() {
            return Err(PibiError::InvalidInput(format!(
                "N={n_parties}, μ={mu}, η={eta}"
            )));
        }
        Ok(Self {
            n_parties,
            mu: mu.rem_euclid(2.0 * PI),
            eta,
        })
    }

    pub fn pure(n_parties: u32, mu: f64) -> Self {
        Self::new(n_parties, mu, 1.0).expect("valid pure parameters")
    }
}

fn ln_binomials(n: u32) -> Vec<f64> {
    let mut ln_fact = vec![0.0; n as usize + 1];
    for k in 1..=n as usize {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    (0..=n as usize)
        .map(|k| ln_fact[n as usize] - ln_fact[k] - ln_fact[n as usize - k])
        .collect()
}

/// Dicke-basis amplitudes of `|Φ(μ)⟩`. Binomials are taken in log space and
/// the result is renormalized to absorb the rounding of the log sums.
pub fn oat_vector(n_parties: u32, mu: f64) -> Vec<C64> {
    let half_n = n_parties as f64 / 2.0;
    let ln2 = std::f64::consts::LN_2;
    let mut v: Vec<C64> = ln_binomials(n_parties)
        .into_iter()
        .enumerate()
        .map(|(k, lb)| {
            let amp = (0.5 * lb - half_n * ln2).exp();
            let x = half_n - k as f64;
            C64::from_polar(amp, -x * x * mu / 2.0)
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// `⟨S_u^order⟩` on `|Φ(μ)⟩` from the closed-form expressions, `order ∈ 1..=4`.
pub fn closed_form_moment(n_parties: u32, mu: f64, u: &Direction, order: u8) -> f64 {
    let s = n_parties as f64 / 2.0;
    let nn = n_parties as i32;
    let (ux, uy, uz) = (u.x, u.y, u.z);
    let (c, sn) = (f64::cos, f64::sin);
    match order {
        1 => s * ux * c(mu / 2.0).powi(nn - 1),
        2 => {
            0.25 * s
                * ((1.0 + 2.0 * s) * (ux * ux + uy * uy)
                    + 2.0 * uz * uz
                    + (2.0 * s - 1.0)
                        * ((ux - uy) * (ux + uy) * c(mu).powi(nn - 2)
                            + 4.0 * uy * uz * c(mu / 2.0).powi(nn - 2) * sn(mu / 2.0)))
        }
        3 => {
            let a = ux * ux + uy * uy;
            s / 8.0
                * (ux
                    * c(mu / 2.0).powi(nn - 3)
                    * ((1.0 - 3.0 * s + 6.0 * s * s) * a
                        - 4.0 * (2.0 + 3.0 * (s - 2.0) * s) * uz * uz
                        + 2.0
                            * ((3.0 * s - 1.0) * a + 2.0 * (1.0 + 3.0 * (s - 1.0) * s) * uz * uz)
                            * c(mu))
                    + (s - 1.0)
                        * (2.0 * s - 1.0)
                        * ux
                        * (ux * ux - 3.0 * uy * uy)
                        * c(1.5 * mu).powi(nn - 3)
                    + 12.0
                        * (s - 1.0)
                        * (2.0 * s - 1.0)
                        * ux
                        * uy
                        * uz
                        * c(mu).powi(nn - 3)
                        * sn(mu))
        }
        4 => {
            let a = ux * ux + uy * uy;
            let (x2, y2, z2) = (ux * ux, uy * uy, uz * uz);
            let c2 = c(2.0 * mu);
            let inner1 = x2 - 2.0 * s * x2 + 2.0 * s * s * x2 + y2 - 2.0 * s * y2
                + 2.0 * s * s * y2
                - 11.0 * z2
                + 18.0 * s * z2
                - 6.0 * s * s * z2
                - 2.0 * x2 * c2
                + 3.0 * s * x2 * c2
                - 2.0 * y2 * c2
                + 3.0 * s * y2 * c2
                + 7.0 * z2 * c2
                - 12.0 * s * z2 * c2
                + 6.0 * s * s * z2 * c2;
            let (h, h3) = (sn(mu / 2.0), sn(1.5 * mu));
            let inner2 = (7.0 - 12.0 * s + 6.0 * s * s) * (x2 + y2) * h
                + (-11.0 + 18.0 * s - 6.0 * s * s) * z2 * h
                + (-2.0 + 3.0 * s) * (x2 + y2) * h3
                + (1.0 - 2.0 * s + 2.0 * s * s) * z2 * h3;
            let bracket =
                (s - 1.0) * (2.0 * s - 3.0) * (x2 * x2 - 6.0 * x2 * y2 + y2 * y2) * c2.powi(nn - 4)
                    + 4.0 * (ux - uy) * (ux + uy) * c(mu).powi(nn - 4) * inner1
                    - 8.0
                        * (s - 1.0)
                        * (2.0 * s - 3.0)
                        * uy
                        * (-3.0 * x2 + y2)
                        * uz
                        * c(1.5 * mu).powi(nn - 4)
                        * h3
                    + 8.0 * uy * uz * c(mu / 2.0).powi(nn - 4) * inner2;
            s / 32.0
                * ((-1.0 + s + 12.0 * s * s + 12.0 * s * s * s) * a * a
                    + 8.0 * s * (6.0 * s - 1.0) * a * z2
                    + 8.0 * (3.0 * s - 1.0) * z2 * z2
                    + (2.0 * s - 1.0) * bracket)
        }
        _ => panic!("closed forms exist for orders 1 to 4"),
    }
}

/// Every correlator up to order `k` of an arbitrary pure symmetric state.
pub fn state_correlators(
    psi: &[C64],
    n: &Direction,
    m: &Direction,
    k: u8,
) -> CorrelatorVector<f64> {
    let n_parties = psi.len() as u32 - 1;
    let table = MomentTable::new(DickeSpace::new(n_parties), psi, n, m);
    let c = n.dot(m);
    let values = CorrelatorLabel::all_up_to(k)
        .into_iter()
        .map(|l| table.eval(&correlator_expression(l, n_parties, c)))
        .collect();
    CorrelatorVector::from_values(n_parties, k, values).expect("complete label set")
}

/// Correlators of `|Φ(μ)⟩` for the pair `(n, m)`.
///
/// Single-direction labels come from the closed-form moments inverted
/// through `S_0 = 2⟨S_n⟩`, `S_00 = 4⟨S_n²⟩ − N`,
/// `S_000 = 8⟨S_n³⟩ − 2(3N−2)⟨S_n⟩`,
/// `S_0000 = 16⟨S_n⁴⟩ − (24N−32)⟨S_n²⟩ + 3N² − 6N`; mixed labels are
/// expectations of the symmetrized operator forms on the state vector.
pub fn correlator_point(
    n_parties: u32,
    mu: f64,
    n: &Direction,
    m: &Direction,
    k: u8,
) -> CorrelatorVector<f64> {
    let psi = oat_vector(n_parties, mu);
    let mut values = state_correlators(&psi, n, m, k).values().to_vec();
    let nf = n_parties as f64;
    for (dir, setting) in [(n, 0u8), (m, 1u8)] {
        let mom: Vec<f64> = (1..=4)
            .map(|o| closed_form_moment(n_parties, mu, dir, o))
            .collect();
        let pure = [
            2.0 * mom[0],
            4.0 * mom[1] - nf,
            8.0 * mom[2] - 2.0 * (3.0 * nf - 2.0) * mom[0],
            16.0 * mom[3] - (24.0 * nf - 32.0) * mom[1] + 3.0 * nf * nf - 6.0 * nf,
        ];
        for order in 1..=k {
            let l = CorrelatorLabel::new(order, if setting == 0 { 0 } else { order })
                .expect("valid label");
            values[l.index()] = pure[order as usize - 1];
        }
    }
    CorrelatorVector::from_values(n_parties, k, values).expect("complete label set")
}

/// Directions from the four angles `(φ0, θ0, φ1, θ1)`.
pub fn directions_from_angles(a: &[f64; 4]) -> (Direction, Direction) {
    (
        Direction::from_angles(a[0], a[1]),
        Direction::from_angles(a[2], a[3]),
    )
}

/// Evaluates a linear functional `constant + Σ k_w S_w` on a fixed state,
/// reusing the state vector.
#[derive(Clone, Debug)]
pub struct BellEvaluator {
    coeffs: Vec<(CorrelatorLabel, f64)>,
    space: DickeSpace,
    psi: Vec<C64>,
    eta: f64,
    constant: f64,
}

impl BellEvaluator {
    pub fn new(family: &InequalityFamily, params: OatParams) -> Self {
        Self::for_state(family, oat_vector(params.n_parties, params.mu), params.eta)
    }

    /// Any pure symmetric state mixed with white noise of weight `1 − η`.
    pub fn for_state(family: &InequalityFamily, psi: Vec<C64>, eta: f64) -> Self {
        let n_parties = psi.len() as u32 - 1;
        let coeffs = family
            .coeffs
            .keys()
            .map(|l| (*l, family.coeff_f64(*l, n_parties)))
            .collect();
        Self::for_functional(family.constant_f64(n_parties), coeffs, psi, eta)
    }

    /// A functional with real coefficients, e.g. an SDP certificate.
    pub fn for_functional(
        constant: f64,
        coeffs: Vec<(CorrelatorLabel, f64)>,
        psi: Vec<C64>,
        eta: f64,
    ) -> Self {
        let space = DickeSpace::new(psi.len() as u32 - 1);
        Self {
            coeffs,
            space,
            psi,
            eta,
            constant,
        }
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        Self {
            eta,
            ..self.clone()
        }
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    fn expression(&self, n: &Direction, m: &Direction) -> WordPoly {
        functional_expression(self.constant, &self.coeffs, self.space.n_parties, n.dot(m))
    }

    /// Value on the pure part.
    pub fn pure_value(&self, n: &Direction, m: &Direction) -> f64 {
        MomentTable::new(self.space, &self.psi, n, m).eval(&self.expression(n, m))
    }

    /// Value on the maximally mixed state, from the exact trace.
    pub fn mixed_value(&self, n: &Direction, m: &Direction) -> f64 {
        OperatorBuilder::new(self.space, n, m)
            .build(&self.expression(n, m))
            .trace()
            .re
            / self.space.dim() as f64
    }

    pub fn value(&self, n: &Direction, m: &Direction) -> f64 {
        let pure = if self.eta > 0.0 {
            self.pure_value(n, m)
        } else {
            0.0
        };
        let mixed = if self.eta < 1.0 {
            self.mixed_value(n, m)
        } else {
            0.0
        };
        self.eta * pure + (1.0 - self.eta) * mixed
    }

    pub fn ratio(&self, angles: &[f64; 4]) -> f64 {
        let (n, m) = directions_from_angles(angles);
        self.value(&n, &m) / self.constant
    }
}

/// `⟨ρ(η, μ), Î⟩` for the four measurement angles.
pub fn bell_value(f: &InequalityFamily, params: OatParams, angles: &[f64; 4]) -> f64 {
    let (n, m) = directions_from_angles(angles);
    BellEvaluator::new(f, params).value(&n, &m)
}

/// Multi-start settings for [`optimize_angles`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSearch {
    pub starts: usize,
    pub f_tol: f64,
    pub max_evals: usize,
    /// Extra starting points tried before the quasi-random ones.
    #[serde(default)]
    pub seeds: Vec<[f64; 4]>,
}

impl Default for AngleSearch {
    fn default() -> Self {
        Self {
            starts: 24,
            f_tol: 1e-9,
            max_evals: 3000,
            seeds: Vec::new(),
        }
    }
}

/// Best angles found for one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleOptimum {
    pub angles: [f64; 4],
    pub value: f64,
    pub ratio: f64,
}

fn halton_angles(i: usize) -> Vec<f64> {
    let h = halton(i, 4);
    vec![2.0 * PI * h[0], PI * h[1], 2.0 * PI * h[2], PI * h[3]]
}

fn search_angles(objective: impl Fn(&[f64; 4]) -> f64, search: &AngleSearch) -> AngleOptimum {
    let opts = NelderMeadOptions {
        initial_step: 0.4,
        f_tol: search.f_tol,
        x_tol: 1e-7,
        max_evals: search.max_evals,
    };
    let starts = search
        .seeds
        .iter()
        .map(|s| s.to_vec())
        .chain((1..=search.starts).map(halton_angles));
    let f = |x: &[f64]| objective(&[x[0], x[1], x[2], x[3]]);
    let best = multi_start(f, starts, opts).expect("at least one start");
    let angles = [best.x[0], best.x[1], best.x[2], best.x[3]];
    AngleOptimum {
        angles,
        value: f64::NAN,
        ratio: best.value,
    }
}

/// Minimizes the relative Bell value over the four angles.
pub fn optimize_angles_for(eval: &BellEvaluator, search: &AngleSearch) -> AngleOptimum {
    let mut best = search_angles(|a| eval.ratio(a), search);
    best.value = best.ratio * eval.constant();
    best
}

/// [`optimize_angles_for`] on `ρ(η, μ)`.
pub fn optimize_angles(
    f: &InequalityFamily,
    params: OatParams,
    search: &AngleSearch,
) -> AngleOptimum {
    optimize_angles_for(&BellEvaluator::new(f, params), search)
}

/// Smallest purity `η` at which `f` still detects `ρ(η, μ)`.
///
/// Bisection on `η` to `1e−4`, re-optimizing the angles at each step from
/// the incumbent plus a few fresh starts. The endpoint is then polished:
/// for fixed angles the value is linear in `η`, so the zero crossing of the
/// current angles is exact, and re-optimizing there repeats until stable.
pub fn min_purity(
    f: &InequalityFamily,
    n_parties: u32,
    mu: f64,
    search: &AngleSearch,
) -> Result<f64> {
    min_purity_for(
        &BellEvaluator::new(f, OatParams::pure(n_parties, mu)),
        search,
    )
}

/// [`min_purity`] for any evaluator; its own `η` is ignored.
pub fn min_purity_for(pure: &BellEvaluator, search: &AngleSearch) -> Result<f64> {
    let pure = pure.with_eta(1.0);
    let top = optimize_angles_for(&pure, search);
    if top.ratio >= -VIOLATION_TOL {
        return Err(PibiError::NoViolation);
    }
    let local = |eta: f64, incumbent: [f64; 4]| -> AngleOptimum {
        let ev = pure.with_eta(eta);
        let s = AngleSearch {
            starts: 4,
            seeds: vec![incumbent],
            ..search.clone()
        };
        optimize_angles_for(&ev, &s)
    };
    let (mut lo, mut hi, mut angles) = (0.0, 1.0, top.angles);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        let opt = local(mid, angles);
        if opt.ratio < 0.0 {
            hi = mid;
            angles = opt.angles;
        } else {
            lo = mid;
        }
    }
    let mut eta = hi;
    let opts = NelderMeadOptions {
        initial_step: 0.05,
        f_tol: 1e-13,
        x_tol: 1e-9,
        max_evals: search.max_evals,
    };
    for _ in 0..30 {
        let (n, m) = directions_from_angles(&angles);
        let (v1, v0) = (pure.pure_value(&n, &m), pure.mixed_value(&n, &m));
        let crossing = v0 / (v0 - v1);
        if !(0.0..=1.0).contains(&crossing) {
            break;
        }
        let ev = pure.with_eta(crossing);
        let refined = nelder_mead(|x| ev.ratio(&[x[0], x[1], x[2], x[3]]), &angles, opts);
        let done = (eta - crossing).abs() < 1e-12;
        eta = eta.min(crossing);
        angles = [refined.x[0], refined.x[1], refined.x[2], refined.x[3]];
        if done || refined.value > -1e-12 {
            break;
        }
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::family;
    use crate::dicke::spin_matrix;
    use crate::label::label;

    #[test]
    fn coherent_two_party_state() {
        let v = oat_vector(2, 0.0);
        for (z, want) in v.iter().zip([0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5]) {
            assert!((z - C64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn normalized_for_any_mu() {
        for (n, mu) in [(1, 0.3), (50, 1.7), (400, 5.9)] {
            let norm: f64 = oat_vector(n, mu).iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_trivial_cases() {
        assert!((closed_form_moment(10, 0.0, &Direction::x_axis(), 1) - 5.0).abs() < 1e-14);
        assert!((closed_form_moment(10, 0.0, &Direction::z_axis(), 2) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn first_moment_against_vector() {
        let psi = oat_vector(20, 0.3);
        let sx = spin_matrix(DickeSpace::new(20), &Direction::x_axis());
        assert!(
            (sx.expectation(&psi).re - closed_form_moment(20, 0.3, &Direction::x_axis(), 1)).abs()
                < 1e-12
        );
    }

    #[test]
    fn closed_forms_match_state_vector() {
        for n in [4u32, 7, 20] {
            for mu in [0.0, 0.35, 1.9, 4.4] {
                let psi = oat_vector(n, mu);
                for (phi, theta) in [(0.3, 1.1), (2.2, 0.4), (-1.0, 2.7)] {
                    let u = Direction::from_angles(phi, theta);
                    let t = MomentTable::new(DickeSpace::new(n), &psi, &u, &u);
                    for order in 1..=4u8 {
                        let direct = t.expect(&vec![0u8; order as usize]).re;
                        let cf = closed_form_moment(n, mu, &u, order);
                        assert!(
                            (direct - cf).abs() < 1e-9 * (1.0 + direct.abs()),
                            "N={n} μ={mu} order {order}: {direct} vs {cf}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn correlator_point_agrees_with_generic_path() {
        let (n, m) = (
            Direction::from_angles(0.2, 1.0),
            Direction::from_angles(1.4, 2.1),
        );
        let fast = correlator_point(18, 0.6, &n, &m, 4);
        let slow = state_correlators(&oat_vector(18, 0.6), &n, &m, 4);
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn coherent_state_is_fully_correlated_along_x() {
        let x = Direction::x_axis();
        let v = correlator_point(12, 0.0, &x, &x, 4);
        assert!((v.get(label("0")).unwrap() - 12.0).abs() < 1e-10);
        assert!((v.get(label("00")).unwrap() - 132.0).abs() < 1e-9);
    }

    #[test]
    fn equal_directions_collapse_labels() {
        let u = Direction::from_angles(0.4, 1.3);
        let v = correlator_point(15, 0.7, &u, &u, 4);
        assert!((v.get(label("01")).unwrap() - v.get(label("00")).unwrap()).abs() < 1e-8);
        assert!((v.get(label("011")).unwrap() - v.get(label("000")).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn maximally_mixed_i2_is_local() {
        let f = family("I2");
        for n in [4, 10, 50] {
            let ev = BellEvaluator::new(&f, OatParams::new(n, 0.0, 0.0).unwrap());
            for a in [
                [0.0, 0.3, 1.0, 2.0],
                [1.0, 1.0, 1.0, 1.0],
                [3.0, 0.1, 5.0, 2.9],
            ] {
                assert!(ev.ratio(&a) > 0.0);
            }
        }
    }

    #[test]
    fn linear_in_eta() {
        let f = family("I3");
        let a = [0.3, 1.1, 2.0, 0.7];
        let v1 = bell_value(&f, OatParams::new(20, 0.4, 1.0).unwrap(), &a);
        let v0 = bell_value(&f, OatParams::new(20, 0.4, 0.0).unwrap(), &a);
        let vh = bell_value(&f, OatParams::new(20, 0.4, 0.37).unwrap(), &a);
        assert!((vh - (0.37 * v1 + 0.63 * v0)).abs() < 1e-10 * v0.abs().max(1.0));
    }
}
