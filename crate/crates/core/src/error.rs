use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{len} coefficients do not fit a series of order {order}")]
    TooManyCoefficients { len: usize, order: usize },

    #[error("constant term is not a unit, series cannot be inverted")]
    NonUnitConstant,

    #[error("index {n} is beyond the truncation order {order}")]
    IndexOutOfRange { n: usize, order: usize },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("eta factor scale must be positive")]
    InvalidScale,

    #[error("exponent k must be nonzero")]
    ZeroExponent,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("recurrence produced an inexact division at n = {n}")]
    InexactDivision { n: usize },

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("requested order {order} exceeds the configured ceiling {ceiling}")]
    OrderCeiling { order: usize, ceiling: usize },

    #[error("spec parse error at position {pos}: {message}")]
    SpecParse { pos: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
