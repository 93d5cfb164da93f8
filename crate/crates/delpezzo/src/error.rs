//! Error type shared across the crate.
//!
//! All arithmetic is checked: exponent or coefficient overflow is reported,
//! never wrapped. Failure of the Laurent property under mutation is an
//! ordinary error as well, since general seeds may lose it.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("coefficient overflow")]
    CoefficientOverflow,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("zero raised to a negative power")]
    ZeroToNegativePower,

    #[error("index {index} out of range (rank {rank})")]
    IndexOutOfRange { index: usize, rank: usize },

    /// Mutation in the given direction (0-based) left the Laurent ring.
    #[error("mutation in direction {direction} does not stay Laurent")]
    NotLaurent { direction: usize },

    /// As [`Error::NotLaurent`], reported with the position in a sequence.
    #[error("mutation step {step} (direction {direction}) does not stay Laurent")]
    NotLaurentAtStep { step: usize, direction: usize },

    #[error("mutation sequence repeats index {index}")]
    RepetitionRejected { index: usize },

    #[error("denominator vanishes at the sample point")]
    DegeneratePoint,

    #[error("resampling budget exhausted while avoiding degenerate points")]
    RetriesExhausted,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("direction ({0}, {1}) is not a primitive nonzero vector")]
    NotPrimitive(i64, i64),

    #[error("directions must be pairwise distinct")]
    DuplicateDirection,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
