use thiserror::Error;

/// Errors raised by descriptor, element, certificate and oracle operations.
///
/// `Unknown` answers are never errors; they are ordinary search outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid basis code: {0}")]
    InvalidCode(String),
    #[error("elements live over different bases ({left} vs {right})")]
    DescriptorMismatch { left: String, right: String },
    #[error("basis `{0}` has no decision for `b = ⊥`")]
    MissingDeltaBot(String),
    #[error("basis `{0}` has no refinement decision")]
    MissingRefineDecision(String),
    #[error("basis `{0}` is missing the order decision required here")]
    MissingDelta(String),
    #[error("basis `{0}` supplies no boundedness data")]
    MissingBoundednessData(String),
    #[error("step function has no join: {0}")]
    UnboundedJoin(String),
    #[error("element `{0}` carries no {1} oracle")]
    MissingOracle(String, &'static str),
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(usize),
    #[error("width schedule violated at index {index}: {detail}")]
    ScheduleViolation { index: usize, detail: String },
    #[error("element `{0}` has no membership decision")]
    NotDecidable(String),
    #[error("size {size} exceeds the limit {limit}")]
    SizeTooLarge { size: usize, limit: usize },
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("certificate replay failed: {0}")]
    ReplayFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
