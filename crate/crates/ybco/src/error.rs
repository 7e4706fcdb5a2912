use thiserror::Error;

/// Crate-wide error type. Every failure carries enough context to identify
/// the offending ring or operand without re-running the computation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("ring mismatch: left operand lives in {left}, right operand in {right}")]
    RingMismatch { left: String, right: String },

    #[error("not a unit in {ring}: {reason}")]
    NonUnit { ring: String, reason: String },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("singular operator: {context}")]
    Singular { context: String },

    #[error("operation requires a field base with no variables or group part, got {ring}: {context}")]
    NonField { ring: String, context: String },

    #[error("unknown variable `{name}` in {ring}")]
    UnknownVariable { name: String, ring: String },

    #[error("invalid word at position {index}: {reason}")]
    InvalidWord { index: usize, reason: String },

    #[error("exact division failed: {0}")]
    NotDivisible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("input is outside the curated set this reducer handles: {0}")]
    OutsideCuratedSet(String),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
