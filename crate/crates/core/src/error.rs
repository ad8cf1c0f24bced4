use thiserror::Error;

/// Errors raised by the algebra, scheme and cycle layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {order} exceeds the size cap {cap}")]
    FieldTooLarge { order: u128, cap: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero element where a unit is required")]
    ZeroElement,
    #[error("incompatible fields: {0}")]
    FieldMismatch(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not irreducible: {0}")]
    NotIrreducible(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid scheme description at {path}: {msg}")]
    Scheme { path: String, msg: String },
    #[error("point does not belong to the scheme: {0}")]
    UnknownPoint(String),
    #[error("codimension {p} out of range for a scheme of dimension {dim}")]
    CodimOutOfRange { p: i64, dim: i64 },
    #[error("support outside the declared curve table: {0}")]
    UndeclaredSupport(String),
    #[error("element is not in A^0: {0}")]
    NotInA0(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
