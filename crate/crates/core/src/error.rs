use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants fall into three classes that the CLI maps onto exit codes:
/// domain errors (bad input), internal invariant violations, and
/// resource limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field modulus is reducible over F_p")]
    ReducibleFieldModulus,
    #[error("invalid field modulus: {0}")]
    InvalidFieldModulus(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("coefficient out of range: {0}")]
    CoefficientOutOfRange(String),
    #[error("polynomial degree too small for irreducibility test")]
    DegreeTooSmall,
    #[error("{0} is not monic")]
    NotMonic(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("exact computation cost {cost} exceeds budget {budget}")]
    CostCeilingExceeded { cost: u128, budget: u64 },
    #[error("n = {0} lies outside the closed-form window")]
    OutOfWindow(u64),
    #[error("closed form requires a prime field (e = 1)")]
    NotPrimeField,
    #[error("internal: division of C_{0}(u) by (1-u) left a nonzero remainder")]
    NonzeroDivisionRemainder(u64),
    #[error("internal: genus formula produced an odd value")]
    ParityViolation,
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 domain, 2 internal, 3 resource limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonzeroDivisionRemainder(_) | Error::ParityViolation | Error::Internal(_) => 2,
            Error::Overflow(_) | Error::CostCeilingExceeded { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
