use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid variety: {0}")]
    InvalidVariety(String),

    #[error("unknown catalog entry {name:?}; available: {}", available.join(", "))]
    NotFound {
        name: String,
        available: Vec<String>,
    },

    #[error("degree {degree} is outside the {branch} branch ({rule})")]
    Branch {
        branch: &'static str,
        degree: i64,
        rule: String,
    },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("hilbert polynomial coefficient of k^{power}: expected {expected}, got {supplied}")]
    HilbertMismatch {
        power: usize,
        expected: String,
        supplied: String,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code: 1 for usage problems, 3 for mathematically
    /// inconsistent input. (2 is reserved for verification failures.)
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse(_) | Error::InvalidInput(_) | Error::NotFound { .. } => 1,
            Error::InvalidVariety(_)
            | Error::Branch { .. }
            | Error::Inconsistent(_)
            | Error::NotApplicable(_)
            | Error::HilbertMismatch { .. }
            | Error::Internal(_) => 3,
        }
    }
}
