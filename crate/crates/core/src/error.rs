use thiserror::Error;

/// Errors reported by the library.
///
/// Domain objects are validated at construction, maps at their preconditions,
/// and exhaustive enumerations against the configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition parts must be positive and weakly decreasing, and the partition non-empty")]
    InvalidPartition,

    #[error("composition parts must be positive and the composition non-empty")]
    InvalidComposition,

    #[error("modulus must be at least {min}, got {got}")]
    InvalidModulus { min: u64, got: u64 },

    #[error("residue set must be a non-empty subset of 1..={max} for modulus {modulus}")]
    InvalidResidueSet { modulus: u64, max: u64 },

    #[error("size must lie in 1..={max}, got {n}")]
    SizeOutOfRange { n: u64, max: u64 },

    #[error("index {index} out of range: size {n} has 2^{} compositions", n - 1)]
    IndexOutOfRange { n: u64, index: u64 },

    #[error("exhaustive enumeration at size {n} exceeds the cap of {cap}")]
    CapExceeded { n: u64, cap: u64 },

    #[error("family `{family}` contains {expected}s, not {got}s")]
    SortMismatch {
        family: String,
        expected: &'static str,
        got: &'static str,
    },

    #[error("map precondition violated at part {index}: {reason}")]
    Precondition { index: usize, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    /// Convenience constructor for [`Error::Parse`].
    pub fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(index: usize, reason: impl Into<String>) -> Self {
        Error::Precondition {
            index,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
