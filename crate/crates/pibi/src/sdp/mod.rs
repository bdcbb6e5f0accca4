//! First level of the moment hierarchy for the symmetrized local polytope.
//!
//! A correlator point `x*` (orders ≤ 3) is tested by maximizing `λ` such that
//! `λ x*` has a positive semidefinite moment matrix `Γ_0 = b bᵀ` and
//! localizing matrices `Γ_i = g_i b bᵀ` (`g_i` the class fractions
//! `a, b, c, d`), all reduced modulo the ideal of local deterministic points.
//! `λ* < 1` certifies nonlocality, and the dual multipliers of the
//! first-row constraints form a Bell inequality separating `x*`.

mod backend;
mod membership;
mod moment;
mod record;
mod reduce;

pub use backend::{
    svec_order, ClarabelBackend, Cone, ConicBackend, ConicProblem, ConicSolution, ACCURACY_ENV,
    DEFAULT_ACCURACY, VERBOSE_ENV,
};
pub use membership::{
    canonical_angles, constrained_membership_sdp, constrained_membership_sdp_with,
    extract_certificate, membership_sdp, membership_sdp_with, optimize_alpha_beta,
    optimize_directions, AlphaBetaOptimum, Certificate, CertificateTerm, DirectionOptimum,
    DirectionSearch, FirstRowConstraint, MembershipOutcome, ThirdMomentWeights, CERTIFICATE_TOL,
    LAMBDA_CAP, NONLOCAL_TOL,
};
pub use moment::{
    basis_labels, scaled_label_polynomial, scaled_multipliers, MomentMatrixSpec, BASIS_LEN, BLOCKS,
};
pub use record::{CertificateRecord, CombinedThirdOrder};
pub use reduce::{
    label_polynomial, reduce_mod_ideal, CorrelatorExpr, MomentMonomial, ReducedPolynomial,
    MAX_MOMENT_DEGREE,
};
