use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite state at substep {substep}")]
    NonFinite { substep: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonFailure { iterations: usize, residual: f64 },

    #[error("rank deficiency: {0}")]
    RankDeficiency(String),

    #[error("bracket condition violated: {0}")]
    BracketViolation(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid tubular data: {0}")]
    InvalidTubular(String),

    #[error("function does not vanish on V")]
    NotVanishingOnV,

    #[error("map does not send V into V'")]
    MapLeavesSubmanifold,

    #[error("curve is not in the weighted normal space: {0}")]
    CurveMembership(String),

    #[error("algebra step {step} exceeds the supported maximum {max}")]
    StepTooLarge { step: usize, max: usize },

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("scaling parameter must be nonzero")]
    ZeroScaling,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("arrows are not composable: {0}")]
    NotComposable(String),

    #[error("invalid spec file: {0}")]
    Spec(String),
}
