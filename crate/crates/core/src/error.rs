use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducibleFound(usize),
    #[error("field of order {p}^{k} does not fit the element representation")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("operands live in different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("coefficient {value} is outside a field of order {order}")]
    InvalidCoefficient { value: u64, order: u32 },
    #[error("local parameter is not irreducible")]
    ReducibleLocalParameter,
    #[error("function has a pole at the evaluation place")]
    PoleAtPlace,
    #[error("no base algorithm for residue degree {k} and multiplicity {u}")]
    UnsupportedBase { k: usize, u: usize },
    #[error("evaluation budget {available} cannot reach the required {needed}")]
    InsufficientPlaces { needed: usize, available: usize },
    #[error("plan does not meet the construction hypotheses: {0}")]
    ConditionsNotMet(String),
    #[error("element does not belong to the algorithm's field")]
    FieldMismatch,
    #[error("operation not defined for tower {0}")]
    UnsupportedTower(String),
    #[error("step index must exceed 2")]
    StepTooSmall,
    #[error("extension degree {n} is below the tower threshold {min}")]
    OutOfRange { n: u64, min: u64 },
    #[error("no bound available for n = {0} without a known-values table")]
    NoDataForN(u64),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
