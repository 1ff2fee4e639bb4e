use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "effect E({alpha},{k}) is not positive (min eigenvalue {min_eigenvalue:e}) at t = {t}; \
         admissible interval is [{t_lo}, {t_hi}]"
    )]
    Positivity {
        alpha: usize,
        k: usize,
        min_eigenvalue: f64,
        t: f64,
        t_lo: f64,
        t_hi: f64,
    },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("unsupported dimension d = {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by a configuration that is well-formed but
    /// mathematically unattainable (out-of-range `t`, infeasible `x`, ...).
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Positivity { .. } | Error::Infeasible(_) | Error::UnsupportedDimension { .. }
        )
    }
}
