//! Error types shared by every module of the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when validating parameters or evaluating
/// the mean-field model, its dynamics, or the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A frequency input (cavity or qubit) is zero, negative, or non-finite.
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    /// The qubit count is below one.
    #[error("n_qubits must be at least 1")]
    ZeroQubits,

    /// The coupling sits at or beyond the boundary where the spectrum
    /// collapses into a continuum and the mean-field model is invalid.
    #[error("coupling g = {g} is within {min_gap} of the unbounded boundary omega/2 = {boundary}")]
    UnboundedRegion { g: f64, boundary: f64, min_gap: f64 },

    /// A quantity left its mathematical domain.
    #[error("{quantity} out of domain: {detail}")]
    Domain {
        quantity: &'static str,
        detail: String,
    },

    /// Covariance integration was asked to take too large a step.
    #[error("integration step {dt} exceeds the allowed maximum {max_dt}")]
    StepTooLarge { dt: f64, max_dt: f64 },

    /// A sweep or scaling point falls in the normal phase.
    #[error("parameter point is not superradiant: {detail}")]
    NotSuperradiant { detail: String },

    /// A fit was attempted with too little data.
    #[error("fit needs at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    /// A time series does not contain enough oscillation minima to
    /// measure a period.
    #[error("series contains {found} oscillation minima, need at least {needed}")]
    TooFewPeriods { found: usize, needed: usize },
}

impl Error {
    fn domain(quantity: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            detail: detail.into(),
        }
    }

    pub(crate) fn domain_err<T>(quantity: &'static str, detail: impl Into<String>) -> Result<T> {
        Err(Self::domain(quantity, detail))
    }
}
