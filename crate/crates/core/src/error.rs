use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    ModulusNotPrime(u64),

    #[error("invalid modulus {0}: must satisfy 2 <= m <= 2^31-1")]
    InvalidModulus(u64),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("ambient dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("inner space is not contained in the outer space")]
    NotASubspace,

    #[error("input algebra is not commutative")]
    NonCommutativeInput,

    #[error("input span is not closed under multiplication")]
    NotClosedInput,

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("group is not abelian")]
    NonAbelian,

    #[error("group of order {order} is not a {p}-group")]
    NotAPGroup { order: usize, p: u32 },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("form is not alternating: {0}")]
    NotAlternating(String),

    #[error("search space too large: {0}")]
    TooLarge(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InternalInvariantViolation(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
