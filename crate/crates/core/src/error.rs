use thiserror::Error;

/// Errors raised by the toolkit. Guard failures name the module that tripped them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus polynomial is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("extension degree {0} requires a modulus polynomial")]
    MissingModulus(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{module}: enumeration guard exceeded ({what}: {size} > {limit})")]
    TooLarge {
        module: &'static str,
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("element {0} is not primitive")]
    NotPrimitive(u32),
    #[error("field of order {q} too small for {b} distinct evaluation columns")]
    FieldTooSmall { q: u32, b: usize },
    #[error("generator matrix is not systematic")]
    NotSystematic,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("set is not a recovery set for object {0}")]
    NotARecoverySet(usize),
    #[error("{module}: constraint explosion ({size} > {limit})")]
    Explosion {
        module: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("points span an affine space of dimension {affine_dim} < {dim}")]
    Degenerate { dim: usize, affine_dim: usize },
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("objective has a negative coefficient")]
    NegativeObjective,
    #[error("outside the supported regime: {0}")]
    RegimeViolation(String),
    #[error("demand sum {0} exceeds b/a")]
    DemandTooLarge(String),
    #[error("division by zero in bound parameter for object {0}")]
    DivisionByZero(usize),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
