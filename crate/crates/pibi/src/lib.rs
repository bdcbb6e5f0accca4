//! Permutationally invariant Bell inequalities with up to four-body correlators.
//!
//! The crate covers the full pipeline around such inequalities:
//!
//! * [`correlator`], [`family`], [`catalog`]: exact correlators of local
//!   deterministic strategies, the built-in inequality families and
//!   exhaustive classical-bound checks.
//! * [`polytope`]: vertices of the symmetrized local polytope and exact
//!   facet verification.
//! * [`dicke`], [`oracle`]: Bell operators in the symmetric subspace, their
//!   minimal eigenvalues and a full-Hilbert-space cross-check.
//! * [`oat`]: one-axis-twisted states, closed-form moments, four-angle
//!   optimization and white-noise robustness.
//! * [`sdp`]: the first-level moment relaxation, dual certificates and the
//!   variant constrained to a single third-order spin moment.
//! * [`nongauss`]: excess kurtosis and spin Wigner negativity.

pub mod catalog;
pub mod correlator;
pub mod dicke;
pub mod error;
pub mod family;
pub mod label;
pub mod linalg;
pub mod nongauss;
pub mod oat;
pub mod optim;
pub mod oracle;
pub mod poly;
pub mod polytope;
pub mod sdp;

pub use catalog::{builtin_catalog, family, find_family};
pub use correlator::{eval_partition_correlators, CorrelatorVector, Partition};
pub use dicke::{bell_operator, optimize_theta, DickeSpace, Direction};
pub use error::{PibiError, Result};
pub use family::{verify_classical_bound, InequalityFamily};
pub use label::CorrelatorLabel;

// The guide's snippets run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/correlators.md")]
    mod correlators {}
    #[doc = include_str!("../../../book/src/polytope.md")]
    mod polytope {}
    #[doc = include_str!("../../../book/src/dicke.md")]
    mod dicke {}
    #[doc = include_str!("../../../book/src/oat.md")]
    mod oat {}
    #[doc = include_str!("../../../book/src/sdp.md")]
    mod sdp {}
    #[doc = include_str!("../../../book/src/nongauss.md")]
    mod nongauss {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
