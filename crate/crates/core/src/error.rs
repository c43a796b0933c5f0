use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A composite cofactor survived the Pollard rho budget. Supplying a cache
    /// entry for it resolves the failure.
    #[error("factorization budget exceeded on cofactor {cofactor}")]
    BudgetExceeded { cofactor: BigUint },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{what} = {size} exceeds the enumeration cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: BigUint,
        cap: u64,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("outside the function's domain: {0}")]
    Domain(String),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("factor cache {path}:{line}: {message}")]
    Cache {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
