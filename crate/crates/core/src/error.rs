use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate basis: vectors are linearly dependent")]
    DegenerateBasis,

    #[error("invalid Plücker vector {coords:?}: {reason}")]
    InvalidPlucker { coords: [i64; 6], reason: &'static str },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    FormNotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("form ({a}, {b}, {c}) is not primitive")]
    ImprimitiveForm { a: i64, b: i64, c: i64 },

    #[error("{0} is not a negative discriminant (must be < 0 and 0 or 1 mod 4)")]
    NotADiscriminant(i64),

    #[error("theorem hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("oracle disagreement at d = {d}: plücker count {plucker}, klein count {klein}")]
    OracleDisagreement { d: u64, plucker: u64, klein: u64 },

    #[error("formula for d = {d} evaluated to the non-integer {value}")]
    NonIntegralFormula { d: u64, value: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
