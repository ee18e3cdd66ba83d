use thiserror::Error;

/// Errors raised by the hookparity kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n = {n} exceeds the partition enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series constant term is not invertible: {0}")]
    NotInvertible(String),

    #[error("{a} has no inverse modulo {m}")]
    NotCoprime { a: i64, m: i64 },

    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(String),

    #[error("invalid modular context: {0}")]
    InvalidContext(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hook-length division is not exact for partition {0}")]
    InexactDivision(String),

    #[error("product diverges: |x| = {modulus} too close to 1 for {terms} terms")]
    DivergentProduct { modulus: String, terms: usize },

    #[error("exact formula did not converge for t = {t}, n = {n} at cutoff {cutoff}: partial sum {partial_sum}")]
    NonConverged {
        t: u32,
        n: u64,
        cutoff: usize,
        partial_sum: String,
    },

    #[error("methods disagree for t = {t}, n = {n}: {detail}")]
    Disagreement { t: u32, n: u64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
