use thiserror::Error;

/// Errors raised by the geometry library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Subtraction of two nearly equal magnitudes; the caller has to
    /// restructure the expression algebraically.
    #[error("catastrophic cancellation: |log|x| - log|y|| = {gap:e}")]
    Cancellation { gap: f64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("indeterminate form 0/0 in Moebius evaluation")]
    Indeterminate,

    #[error("invalid cylinder: {0}")]
    InvalidCylinder(String),

    #[error("invalid ray: {0}")]
    InvalidRay(String),

    #[error("empty component selection")]
    EmptySelection,

    #[error("unknown component `{0}`")]
    UnknownComponent(String),

    #[error("weight vectors are proportional; no reparameterization separates them")]
    ProportionalWeights,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
