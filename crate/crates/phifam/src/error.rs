//! Error type shared by all modules.

use thiserror::Error;

/// Failures surfaced by the deformed-calculus and family machinery.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar so
/// the error type stays non-generic.
#[derive(Debug, Clone, Error)]
pub enum PhiError {
    /// A deformed logarithm or similar map was queried outside `(0, inf)`.
    #[error("input must be strictly positive, got {0}")]
    NonPositiveInput(f64),

    /// The moment integral of `u / phi(u)` near zero diverges, so `chi` and
    /// the information content are undefined for this deformer.
    #[error("moment integral of u/phi(u) diverges near zero")]
    DivergentMoment,

    /// An integral grew without bound under adaptive refinement.
    #[error("integral diverges while computing {0}")]
    DivergentIntegral(&'static str),

    /// No normalizer exists for the requested parameter vector.
    #[error("parameter lies outside the family domain: {0}")]
    OutsideDomain(String),

    /// The escort density vanishes at a point where the base family still
    /// varies, so escort-weighted quantities are ill-defined.
    #[error("escort support mismatch at x = {x} where |dp| = {dp:.3e}")]
    SupportMismatch { x: f64, dp: f64 },

    /// A denominator required by a bound computation vanished.
    #[error("denominator vanished in {0}")]
    ZeroDenominator(&'static str),

    /// The information matrix is numerically singular.
    #[error("metric is numerically singular (condition number {0:.3e})")]
    SingularMetric(f64),

    /// Two densities were combined across different measure spaces.
    #[error("probability densities live on different measure spaces")]
    SpaceMismatch,

    /// Malformed construction input (bad knots, negative weights, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, PhiError>;
