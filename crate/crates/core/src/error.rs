use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("field of size {p}^{k} is not supported (q must be at most 65536)")]
    UnsupportedField { p: u32, k: u32 },

    #[error("inverse of zero")]
    InverseOfZero,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("characteristic-3 required for {0}")]
    CharacteristicThreeRequired(&'static str),

    #[error("polynomial is not cubefree")]
    NotCubefree,

    #[error("degree {degree} is not 2g+1 or 2g+2 for g = {genus}")]
    DegreeMismatch { degree: usize, genus: usize },

    #[error("enumeration needs {needed} work units, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("outside the covered regime: {0}")]
    Regime(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
