use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PibiError {
    #[error("correlator {0} has a nonzero coefficient but is missing from the vector")]
    MissingCorrelator(String),
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeTooHigh { degree: u32, cap: u32 },
    #[error("reduction produced degree {0}, above the moment-matrix cap of 7")]
    DegreeOverflow(u32),
    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("eigensolver failed: {0}")]
    ConvergenceFailure(String),
    #[error("conic solver failed with status {0}")]
    SolverFailure(String),
    #[error("certificate is violated by a classical vertex: min value {0:e}")]
    InvalidCertificate(f64),
    #[error("the state does not violate the inequality even at unit purity")]
    NoViolation,
    #[error("no direction pair gives a point outside the relaxation")]
    NoViolationFound,
    #[error("variance {0:e} along the requested direction is degenerate")]
    DegenerateVariance(f64),
    #[error("quadrature did not converge after {doublings} doublings (last change {change:e})")]
    NonConvergence { doublings: usize, change: f64 },
}

pub type Result<T> = std::result::Result<T, PibiError>;
