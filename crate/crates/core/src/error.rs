use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("|alpha| = {alpha} exceeds the Fock-engine limit {max}; use the analytic path")]
    AmplitudeTooLarge { alpha: f64, max: f64 },

    #[error("truncation tail {tail:e} above tolerance {tol:e} at dimension {dim}")]
    TruncationUnachievable { tail: f64, tol: f64, dim: usize },

    #[error("moment order k + l = {0} exceeds 4")]
    OrderTooHigh(usize),

    #[error("mean photon number is zero; Fano factor undefined")]
    ZeroMeanPhoton,

    #[error("mean photon number {0:e} of the displaced field is not positive")]
    DegenerateDenominator(f64),

    #[error("{what} did not converge within {iterations} iterations (kz = {kz})")]
    NonConvergence {
        what: &'static str,
        kz: f64,
        iterations: usize,
    },

    #[error("denominator quadratic form is singular")]
    SingularDenominatorForm,

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("kz = {kz} outside the validity range [{min}, {max}]")]
    OutOfValidityRange { kz: f64, min: f64, max: f64 },

    #[error("target {target_db} dB is below the physical floor {floor_db} dB")]
    TargetBelowFloor { target_db: f64, floor_db: f64 },

    #[error("no real root for target {0} dB")]
    NoRealRoot(f64),

    #[error("state dimension {dim} exceeds the Wigner limit {max}")]
    StateTooLarge { dim: usize, max: usize },

    #[error("numerical overflow in {0}")]
    NumericalOverflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
