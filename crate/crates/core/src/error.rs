use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("field singularity: {0}")]
    Singularity(String),

    #[error("parameters do not form a double well (2*pi*L*I_c/Phi0 = {beta:.4})")]
    NoDoubleWell { beta: f64 },

    #[error("flux grid too narrow: boundary amplitude {ratio:.3e} of maximum")]
    GridTooNarrow { ratio: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trajectory misses the field region (max gradient {max_gradient:.3e} T/m)")]
    NoInteraction { max_gradient: f64 },

    #[error("two-branch approximation invalid: kick spread {dp_spread:.3e} >= packet momentum width {dp_packet:.3e}")]
    ApproximationInvalid { dp_spread: f64, dp_packet: f64 },

    #[error("decoherence budget exceeded: margin {margin:.3} < required {required}")]
    DecoherenceBudgetExceeded { margin: f64, required: f64 },

    #[error("state has zero norm: {0}")]
    ZeroNorm(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Singularity(_) => "singularity",
            Error::NoDoubleWell { .. } => "no_double_well",
            Error::GridTooNarrow { .. } => "grid_too_narrow",
            Error::Config(_) => "config",
            Error::NoInteraction { .. } => "no_interaction",
            Error::ApproximationInvalid { .. } => "approximation_invalid",
            Error::DecoherenceBudgetExceeded { .. } => "decoherence_budget_exceeded",
            Error::ZeroNorm(_) => "zero_norm",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub(crate) fn ensure_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name}: non-finite input")))
    }
}
