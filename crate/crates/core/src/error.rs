use thiserror::Error;

/// Failures of a single iteration step.
///
/// The solve loops never surface these to the caller directly; they are
/// folded into the trace status or trigger a per-iteration fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("derivative is singular at the current iterate")]
    DerivativeSingular,
    #[error("corrected Newton denominator vanishes")]
    CnDenominatorSingular,
    #[error("current iterate coincides with the extended Newton constant c")]
    EnDegenerate,
    #[error("r(x) - r(c) vanishes in the extended Newton step")]
    EnDenominatorSingular,
    #[error("linear system is singular")]
    SingularMatrix,
    #[error("method needs second derivatives the problem does not provide")]
    MissingSecondDerivative,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grid is degenerate: {0}")]
    DegenerateGrid(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
