use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("{m} does not divide {n}")]
    NotADivisor { n: u64, m: u64 },

    #[error("weight set {spec} is empty modulo {n}")]
    EmptyWeightSet { spec: String, n: u64 },

    #[error("invalid weight set: {0}")]
    InvalidWeightSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rows are linearly independent; no kernel vector")]
    NoKernel,

    #[error("weight set is not a subgroup of U({0})")]
    NotASubgroup(u64),

    #[error("no closed form covers {0}")]
    NoFormula(String),

    #[error("search budget exhausted; value lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: u64, upper: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
