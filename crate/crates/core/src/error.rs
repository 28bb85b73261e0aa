use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a semigroup needs at least one generator")]
    EmptyGenerators,

    #[error("generator {0} is not a positive integer")]
    NonPositiveGenerator(i64),

    #[error("generator {0} appears more than once")]
    DuplicateGenerator(i64),

    #[error("{0} is not an element of the semigroup")]
    NotAnElement(i64),

    #[error("Apéry base {0} must be a positive element of the semigroup")]
    InvalidAperyBase(i64),

    #[error("operation requires gcd 1 but the generators have gcd {0}")]
    NotNumerical(i64),

    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("horizon {horizon} does not exceed the recurrence bound {bound}")]
    HorizonTooSmall { horizon: i64, bound: i64 },

    #[error("multiple {multiple} does not exceed the Frobenius number {frobenius}")]
    BelowFrobenius { multiple: i64, frobenius: i64 },

    #[error("relation sides factor different elements ({left} and {right})")]
    NotInKernel { left: i64, right: i64 },

    #[error("family has period zero (all offset/weight ratios are equal)")]
    ZeroPeriod,

    #[error("operation requires the first weight to be 1, found {0}")]
    LeadingWeightNotOne(i64),

    #[error("family must be normalized first")]
    NotNormalized,

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("residue class {residue} has {found} samples, at least {needed} required")]
    InsufficientSamples {
        residue: usize,
        found: usize,
        needed: usize,
    },

    #[error("period must be at least 1")]
    ZeroPeriodFit,
}
