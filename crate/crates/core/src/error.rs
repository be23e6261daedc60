use thiserror::Error;

use crate::trace::grammar::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is out of range (need an odd prime 3 <= p <= 2^31)")]
    ModulusOutOfRange(u64),

    #[error("{0} has no inverse modulo {1}")]
    NotInvertible(u64, u64),

    #[error("{g} is not a primitive root modulo {p} (order {order})")]
    NotPrimitive { g: u64, p: u64, order: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("sieve cache: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ModulusOutOfRange(_) => "modulus_out_of_range",
            Error::NotInvertible(..) => "not_invertible",
            Error::NotPrimitive { .. } => "not_primitive",
            Error::Precondition(_) => "precondition",
            Error::Capacity { .. } => "capacity",
            Error::Domain(_) => "domain",
            Error::Invariant(_) => "invariant",
            Error::Parse(_) => "parse",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Precondition(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
