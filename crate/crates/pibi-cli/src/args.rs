//! Command-line surface and the resolved run configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "pibi",
    version,
    about = "Permutationally invariant Bell inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Exhaustive classical-bound check over all partitions.
    VerifyClassical(VerifyArgs),
    /// Distinct vertices of the symmetrized local polytope.
    Vertices(VerticesArgs),
    /// Validity and facet status of families on the polytope.
    FacetCheck(FacetArgs),
    /// Best single-angle relative violation versus N.
    Violation(ViolationArgs),
    /// Relative violation of one-axis-twisted states versus μ.
    OatScan(OatScanArgs),
    /// Minimal purity η still detected, versus μ.
    NoiseRobustness(NoiseArgs),
    /// Moment-SDP membership test and certificate extraction.
    SdpMembership(SdpArgs),
    /// Extremal state of a family, its kurtosis and Wigner function.
    I4State(StateArgs),
    /// Kurtosis and Wigner negativity of one-axis-twisted states versus μ.
    Nongauss(NongaussArgs),
    /// Export built-in inequality families as JSON.
    Catalog(CatalogArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyClassical(_) => "verify-classical",
            Command::Vertices(_) => "vertices",
            Command::FacetCheck(_) => "facet-check",
            Command::Violation(_) => "violation",
            Command::OatScan(_) => "oat-scan",
            Command::NoiseRobustness(_) => "noise-robustness",
            Command::SdpMembership(_) => "sdp-membership",
            Command::I4State(_) => "i4-state",
            Command::Nongauss(_) => "nongauss",
            Command::Catalog(_) => "catalog",
        }
    }

    /// Range and consistency checks run before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            Command::VerifyClassical(a) => {
                a.families.check(true)?;
                if let Some(lo) = a.n_min {
                    if lo < 1 || lo > a.n_max {
                        return Err(CliError::usage(format!(
                            "--n-min {lo} must lie in 1..={}",
                            a.n_max
                        )));
                    }
                }
                Ok(())
            }
            Command::Vertices(a) => {
                positive("--n", a.n)?;
                if !(1..=4).contains(&a.order) {
                    return Err(CliError::usage("--order must be between 1 and 4"));
                }
                Ok(())
            }
            Command::FacetCheck(a) => {
                a.families.check(false)?;
                at_least("--n", a.n, 2)
            }
            Command::Violation(a) => {
                a.families.check(false)?;
                a.n.min_at_least("--n", 2)?;
                at_least("--theta-grid", a.theta_grid as u32, 8)
            }
            Command::OatScan(a) => {
                if a.families.is_empty() && a.certificate.is_none() {
                    return Err(CliError::usage("give --family or --certificate"));
                }
                at_least("--n", a.n, 2)?;
                a.mu.check()?;
                unit_interval("--eta", a.eta)?;
                positive("--starts", a.starts as u32)
            }
            Command::NoiseRobustness(a) => {
                if a.families.is_empty() {
                    return Err(CliError::usage("--family is required"));
                }
                at_least("--n", a.n, 2)?;
                a.mu.check()?;
                positive("--starts", a.starts as u32)
            }
            Command::SdpMembership(a) => {
                at_least("--n", a.n, 2)?;
                if !a.mu.is_finite() {
                    return Err(CliError::usage("--mu must be finite"));
                }
                if let Some(v) = &a.angles {
                    if v.len() != 4 || v.iter().any(|x| !x.is_finite()) {
                        return Err(CliError::usage(
                            "--angles takes four finite values φ0,θ0,φ1,θ1",
                        ));
                    }
                }
                if let Some(ab) = a.alpha_beta {
                    if !ab.is_finite() {
                        return Err(CliError::usage("--alpha-beta must be finite"));
                    }
                    if a.constrain.is_none() {
                        return Err(CliError::usage(
                            "--alpha-beta needs --constrain one-third-moment",
                        ));
                    }
                }
                at_least("--gamma-grid", a.gamma_grid as u32, 3)
            }
            Command::I4State(a) => {
                at_least("--n", a.n, 2)?;
                at_least("--theta-grid", a.theta_grid as u32, 8)?;
                a.grid.check()
            }
            Command::Nongauss(a) => {
                at_least("--n", a.n, 2)?;
                a.mu.check()?;
                at_least("--kurtosis-grid", a.kurtosis_grid as u32, 2)
            }
            Command::Catalog(a) => a.families.check(true),
        }
    }
}

fn positive(flag: &str, v: u32) -> Result<(), CliError> {
    at_least(flag, v, 1)
}

fn at_least(flag: &str, v: u32, lo: u32) -> Result<(), CliError> {
    if v < lo {
        return Err(CliError::usage(format!(
            "{flag} must be at least {lo}, got {v}"
        )));
    }
    Ok(())
}

fn unit_interval(flag: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(CliError::usage(format!(
            "{flag} must lie in (0, 1], got {v}"
        )));
    }
    Ok(())
}

/// Where results go and in which format.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (each subcommand has its own default).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Family selection shared by several subcommands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    /// Comma-separated family names, e.g. `I2,I3,I3_7`.
    #[arg(long = "family", value_delimiter = ',')]
    pub names: Vec<String>,
    /// Every built-in family.
    #[arg(long)]
    pub all: bool,
    /// JSON file with one family or an array of families.
    #[arg(long)]
    pub family_file: Option<PathBuf>,
}

impl FamilyArgs {
    pub fn is_empty(&self) -> bool {
        !self.all && self.names.is_empty() && self.family_file.is_none()
    }

    fn check(&self, empty_means_all: bool) -> Result<(), CliError> {
        if !empty_means_all && !self.all && self.names.is_empty() && self.family_file.is_none() {
            return Err(CliError::usage("give --family, --family-file or --all"));
        }
        Ok(())
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    /// First party number (default: the family minimum).
    #[arg(long)]
    pub n_min: Option<u32>,
    #[arg(long, default_value_t = 100)]
    pub n_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VerticesArgs {
    #[arg(long)]
    pub n: u32,
    /// Largest correlator order K.
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FacetArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ViolationArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    /// Party numbers: `7`, `5..100`, `10..200:10` or `4,8,16`.
    #[arg(long)]
    pub n: NSet,
    /// Coarse θ grid before golden-section refinement.
    #[arg(long, default_value_t = 720)]
    pub theta_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `μ` values `min, …, max` in `steps` equal intervals plus one.
#[derive(Debug, Clone, Args, Serialize)]
pub struct MuRange {
    #[arg(long, default_value_t = 0.0)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 0.4)]
    pub mu_max: f64,
    /// Number of μ values.
    #[arg(long, default_value_t = 41)]
    pub mu_points: usize,
}

impl MuRange {
    pub fn values(&self) -> Vec<f64> {
        if self.mu_points == 1 {
            return vec![self.mu_min];
        }
        let step = (self.mu_max - self.mu_min) / (self.mu_points - 1) as f64;
        (0..self.mu_points)
            .map(|i| self.mu_min + step * i as f64)
            .collect()
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.mu_min.is_finite() && self.mu_max.is_finite()) || self.mu_min > self.mu_max {
            return Err(CliError::usage(format!(
                "μ range {}..{} is empty",
                self.mu_min, self.mu_max
            )));
        }
        if self.mu_points == 0 {
            return Err(CliError::usage("--mu-points must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Args, Serialize)]
pub struct OatScanArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    /// Certificate JSON from `sdp-membership`, scanned as an extra row set.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    #[command(flatten)]
    pub mu: MuRange,
    /// Purity of the state.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Quasi-random starts of the angle search.
    #[arg(long, default_value_t = 24)]
    pub starts: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    #[command(flatten)]
    pub mu: MuRange,
    #[arg(long, default_value_t = 24)]
    pub starts: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    /// Keep only `⟨S_a³⟩` with `a = α m + β n` among third-order constraints.
    OneThirdMoment,
}

#[derive(Debug, Args, Serialize)]
pub struct SdpArgs {
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    #[arg(long, default_value_t = 0.2)]
    pub mu: f64,
    /// Measurement angles `φ0,θ0,φ1,θ1`; searched when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub constrain: Option<Constraint>,
    /// Fixed ratio α/β; optimized when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_beta: Option<f64>,
    /// Grid over γ (α = sin γ, β = cos γ) before refinement.
    #[arg(long, default_value_t = 36)]
    pub gamma_grid: usize,
    /// Also report the combined coefficient for weights scaled so that β equals this.
    #[arg(long)]
    pub beta_scale: Option<f64>,
    #[arg(long, default_value = "certificate")]
    pub name: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Polar nodes of the Wigner grid (default 2(N+1)).
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Azimuthal nodes of the Wigner grid (default 2(N+1)+1).
    #[arg(long)]
    pub n_phi: Option<usize>,
}

impl GridArgs {
    fn check(&self) -> Result<(), CliError> {
        if self.n_theta.is_some_and(|v| v < 2) || self.n_phi == Some(0) {
            return Err(CliError::usage(
                "Wigner grid needs at least 2 polar and 1 azimuthal node",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    #[arg(long, default_value = "I4")]
    pub family: String,
    #[arg(long, default_value_t = 720)]
    pub theta_grid: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Wigner function samples as CSV `theta,phi,w`.
    #[arg(long)]
    pub wigner_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct NongaussArgs {
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    #[command(flatten)]
    pub mu: MuRange,
    #[arg(long, default_value_t = 64)]
    pub kurtosis_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub families: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A set of party numbers written as `7`, `a..b`, `a..b:step` or a list.
#[derive(Debug, Clone, PartialEq)]
pub struct NSet {
    text: String,
    values: Vec<u32>,
}

impl NSet {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    fn min_at_least(&self, flag: &str, lo: u32) -> Result<(), CliError> {
        match self.values.iter().min() {
            Some(&m) if m >= lo => Ok(()),
            Some(&m) => Err(CliError::usage(format!(
                "{flag} must be at least {lo}, got {m}"
            ))),
            None => Err(CliError::usage(format!("{flag} is empty"))),
        }
    }
}

impl FromStr for NSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
        let mut values = Vec::new();
        for part in s.split(',') {
            if let Some((lo, rest)) = part.split_once("..") {
                let (hi, step) = match rest.split_once(':') {
                    Some((h, st)) => (int(h)?, int(st)?),
                    None => (int(rest)?, 1),
                };
                let lo = int(lo)?;
                if lo > hi || step == 0 {
                    return Err(format!("range `{part}` is empty"));
                }
                values.extend((lo..=hi).step_by(step as usize));
            } else {
                values.push(int(part)?);
            }
        }
        Ok(Self {
            text: s.to_string(),
            values,
        })
    }
}

impl fmt::Display for NSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for NSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// Everything needed to reproduce a run; embedded in every output.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(flatten)]
    pub command: &'a Command,
    pub sdp_accuracy: f64,
}
