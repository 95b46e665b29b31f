use thiserror::Error;

/// Errors raised by the p-adic machinery and the classification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is not supported here: {1}")]
    UnsupportedPrime(u64, &'static str),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("valuation of zero requested through a nonzero-only entry point")]
    ZeroValuation,
    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("element is not a unit")]
    NotUnit,
    #[error("{op} outside its domain: {why}")]
    Domain { op: &'static str, why: String },
    #[error("condition ({condition}) fails at ell = {ell}: {detail}")]
    ConditionFailed {
        condition: &'static str,
        ell: i64,
        detail: String,
    },
    #[error("extension coordinates of a Galois-stable quantity do not vanish ({what})")]
    GaloisInstability { what: String },
    #[error("all computed quantities vanish modulo p^{0}; more precision needed")]
    PrecisionExhausted(u32),
    #[error("factorization of {0} failed")]
    Factorization(u64),
    #[error("invalid formula spec: {0}")]
    InvalidFormula(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sub-certificate failed: {0}")]
    Certificate(String),
    #[error("embedded data is corrupt: {0}")]
    Asset(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
