use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the geometric and spectral routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point outside the exterior domain: r = {radius} (need r > {minimum})")]
    Domain { radius: f64, minimum: f64 },

    #[error("{family}: radius {radius} is inside the horizon at {horizon}")]
    Horizon {
        family: &'static str,
        radius: f64,
        horizon: f64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value while evaluating {what} at {at:?}")]
    NonFinite { what: &'static str, at: Vec<f64> },

    #[error("finite-difference step {step} underflows at scale {scale}")]
    StepUnderflow { step: f64, scale: f64 },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("singular metric matrix at {at:?}")]
    SingularMetric { at: Vec<f64> },

    #[error("extrapolation did not converge: {reason}")]
    NonConvergence {
        reason: String,
        table: Vec<(f64, f64)>,
    },

    #[error("fiber sampling: {samples} samples cannot resolve wavenumber {k} (need at least {needed})")]
    Aliasing {
        samples: usize,
        k: usize,
        needed: usize,
    },

    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    #[error("source does not decay fast enough: {0}")]
    Decay(String),

    #[error("weight {delta} is critical for m = {base_dim}")]
    Critical { delta: f64, base_dim: usize },

    #[error("ill-posed decay window: condition number {condition:e}")]
    IllPosedWindow { condition: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("field is not harmonic: relative residual {residual:e}")]
    NotHarmonic { residual: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
