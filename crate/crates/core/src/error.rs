use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("subsystem `{0}` has dimension 0")]
    ZeroDimension(String),

    #[error("total dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not {expected} (deviation {deviation:.3e})")]
    InvalidOperator { expected: &'static str, deviation: f64 },

    #[error("Kraus operators violate completeness (deviation {0:.3e})")]
    Completeness(f64),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("invalid projector family: {0}")]
    InvalidProjectors(String),

    #[error("value {value} outside domain [0, {max}]")]
    OutOfDomain { value: f64, max: f64 },

    #[error("no step count up to {cap} reaches error {eps:e} (error at cap {error:.3e})")]
    StepCapExceeded { cap: u64, eps: f64, error: f64 },

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
