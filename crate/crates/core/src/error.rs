use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus must be a positive integer")]
    ZeroModulus,

    #[error("{q} is not squarefree: {prime}^2 divides it")]
    NotSquarefree { q: u64, prime: u64 },

    #[error("unsupported field degree {0} (expected 2, 3, 4 or 5)")]
    Degree(u32),

    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: &'static str },

    #[error("exact arithmetic overflowed while computing {0}")]
    Overflow(&'static str),

    #[error("model family does not match the data: {0}")]
    Mismatch(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),

    #[error("empty sample")]
    Empty,

    #[error("prime table covers n <= {limit} but {needed} was requested")]
    TableTooSmall { limit: u64, needed: u64 },
}

impl Error {
    pub(crate) const fn domain(what: &'static str, detail: &'static str) -> Self {
        Error::Domain { what, detail }
    }
}
