//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong, with enough payload to report a cause.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("mixed ring contexts: {0}")]
    MixedContext(String),
    #[error("prime {0} hits a coefficient denominator")]
    BadPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree {degree} exceeds the factorization bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("variable {0} already present in the ring")]
    VariableClash(String),
    #[error("exponent overflow while multiplying monomials")]
    ExponentOverflow,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("ideal is not homogeneous: generator {0}")]
    NotHomogeneous(String),
    #[error("no primality strategy applies: {0}")]
    UnsupportedShape(String),
    #[error("{0} is not a minimal prime of the ideal")]
    NotMinimalPrime(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("homology is not finite length at the component: {0}")]
    NotFiniteLength(String),
    #[error("intersection is not proper: {0}")]
    ImproperIntersection(String),
    #[error("component {component} is not finite over the source: no monic polynomial in {variable}")]
    NotFinite { component: String, variable: String },
    #[error("component {0} is not surjective onto a source component")]
    NotSurjective(String),
    #[error("map image does not land in the target variety: {0}")]
    ImageNotInTarget(String),
    #[error("extension degree computation failed on component {0}")]
    DegreeComputationFailed(String),
    #[error("operand vanishes at almost every sampled prime")]
    DivisionByZeroAlmostEverywhere,
    #[error("prime {p} exceeds the brute-force evaluation bound {bound}")]
    PrimeTooLarge { p: u64, bound: u64 },
    #[error("quantifier depth {depth} exceeds the bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
