//! Failure classes and their exit codes.

use std::fmt;

use pibi::PibiError;

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// A check failed: classical bound violated, invalid certificate, no violation.
pub const EXIT_VALIDATION: i32 = 1;
/// A numerical solver did not converge.
pub const EXIT_SOLVER: i32 = 2;
/// Bad arguments (`EX_USAGE`).
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Solver(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Validation(_) | Self::Io(_) => EXIT_VALIDATION,
            Self::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Validation(m) => write!(f, "validation failed: {m}"),
            Self::Solver(m) => write!(f, "solver failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<PibiError> for CliError {
    fn from(e: PibiError) -> Self {
        let msg = e.to_string();
        match e {
            PibiError::InvalidInput(_)
            | PibiError::Parse { .. }
            | PibiError::SizeLimit { .. }
            | PibiError::DegreeTooHigh { .. } => Self::Usage(msg),
            PibiError::SolverFailure(_)
            | PibiError::ConvergenceFailure(_)
            | PibiError::NonConvergence { .. } => Self::Solver(msg),
            PibiError::MissingCorrelator(_)
            | PibiError::DegreeOverflow(_)
            | PibiError::InvalidCertificate(_)
            | PibiError::NoViolation
            | PibiError::NoViolationFound
            | PibiError::DegenerateVariance(_) => Self::Validation(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.to_string())
    }
}
