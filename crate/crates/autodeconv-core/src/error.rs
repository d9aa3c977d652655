use alloc::string::String;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two grid functions were combined across different grids.
    #[error("incompatible grids")]
    IncompatibleGrids,
    /// A constructor was handed values violating a type invariant.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A non-finite value (NaN or infinity) was encountered at construction.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    /// Spline evaluation outside the unit interval.
    #[error("evaluation outside [0,1]: t = {t}")]
    OutsideDomain { t: f64 },
    /// A direct linear solve hit a (numerically) singular matrix.
    #[error("{0}")]
    Singular(&'static str),
    /// The damped Newton iteration did not reach the requested tolerance.
    #[error("Newton did not converge: residual norm {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    /// Degenerate explicit-solver division mα + x¹ ≈ 0 (α and data both zero).
    #[error("explicit solver degenerate: m*alpha + x^1 vanishes")]
    DegenerateLeadingCoefficient,
    /// Quadratic formula for x¹ has negative discriminant (negative data).
    #[error("negative discriminant for x^1; data must be clipped nonnegative")]
    NegativeDiscriminant,
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl core::fmt::Display) -> Self {
        Error::Invalid(alloc::format!("{msg}"))
    }
}
