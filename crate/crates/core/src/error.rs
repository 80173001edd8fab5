use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("incompatible grids: {0}")]
    IncompatibleGrid(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("derivative order {order} needs at least {needed} grid nodes, got {nodes}")]
    DerivativeOrderTooHigh {
        order: usize,
        needed: usize,
        nodes: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sample {index} is not covered by any center")]
    UncoveredSample { index: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("malformed network document: {0}")]
    MalformedDocument(String),

    #[error("unknown {field} `{value}`")]
    UnknownName { field: String, value: String },

    #[error("inconsistent network document: {0}")]
    InconsistentDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
