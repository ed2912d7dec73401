use thiserror::Error;

/// Errors produced by model construction, analysis and scenario parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} states, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state count {0} outside supported range 1..={max}", max = crate::MAX_STATES)]
    StateCount(usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("conditioning on an event of probability zero")]
    ZeroProbabilityEvent,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("construction not applicable: {0}")]
    NotApplicable(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }

    /// True for errors caused by malformed or inconsistent input
    /// (as opposed to guard violations or inapplicable constructions).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Dimension { .. }
                | Error::StateCount(_)
                | Error::InvalidDistribution(_)
                | Error::ZeroProbabilityEvent
                | Error::InvalidParameter(_)
                | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
