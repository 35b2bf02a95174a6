use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("dimension {dim} exceeds the dense limit {limit}")]
    Capacity { dim: u64, limit: u64 },

    #[error("charge window [{lo}, {hi}] lies outside the physical basis [{min}, {max}]")]
    WindowOutOfRange { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("eigensolver did not converge: {what} (achieved {achieved:e}, requested {requested:e})")]
    NoConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("charge window not converged at half-width {half_width}: relative change {change:e} > {rtol:e}")]
    WindowNotConverged { half_width: u64, change: f64, rtol: f64 },

    #[error("offset charge {n_g} is not a two-state degeneracy point")]
    NotDegeneracyPoint { n_g: f64 },

    #[error("Bogoliubov coefficients are not symplectic: u+^2 - u-^2 = {norm}")]
    NonSymplectic { norm: f64 },

    #[error("operator polynomial exceeded {cap} terms")]
    TermOverflow { cap: usize },

    #[error("truncated Fock oracle unstable: {change:e} change between dims {dim} and {next}")]
    OracleUnstable { dim: usize, next: usize, change: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure as opposed to bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::WindowNotConverged { .. }
                | Error::OracleUnstable { .. }
                | Error::TermOverflow { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
