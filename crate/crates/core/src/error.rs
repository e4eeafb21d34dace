use thiserror::Error;

/// Errors raised by the engine. Inconsistent equation systems are reported
/// as data (obstructions), never through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value bound for indeterminate `{0}`")]
    UnboundIndeterminate(String),
    #[error("basis mismatch: {0} vs {1}")]
    BasisMismatch(String, String),
    #[error("polynomial basis does not admit negative index {0}")]
    NegativePolynomialIndex(i64),
    #[error("comparison below reliable floor: requested grade {requested}, reliable from {floor}")]
    BelowFloor { requested: i64, floor: i64 },
    #[error("insufficient evaluation depth: reliable floor is {actual}, need {required} or lower")]
    InsufficientDepth { required: i64, actual: i64 },
    #[error("element must be exact (a Laurent polynomial)")]
    InexactOperand,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parameters must be numeric: {0}")]
    SymbolicParameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
