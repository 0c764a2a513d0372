use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not a root of unity")]
    NotRootOfUnity,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus {p}^{m} is not supported: {reason}")]
    InvalidModulus { p: u64, m: u32, reason: &'static str },

    #[error("modulus {modulus} exceeds the discrete-log table bound {bound}")]
    TableTooLarge { modulus: u64, bound: u64 },

    #[error("expected {expected} generator exponents, got {got}")]
    ExponentCount { expected: usize, got: usize },

    #[error("k = {k} does not have the opposite parity of the character")]
    Parity { k: u64 },

    #[error("the normalized L-value is undefined for modulus {p}^{m} (conductor {conductor})")]
    UndefinedScriptL { p: u64, m: u32, conductor: u64 },

    /// A theorem hypothesis fails; the instance is out of scope, not a counterexample.
    #[error("hypothesis violated: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
