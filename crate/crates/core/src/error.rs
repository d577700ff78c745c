use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("infeasible forcing: {0}")]
    InfeasibleForcing(String),

    #[error("brute force refused: {0}")]
    TooLarge(String),

    #[error("cannot decode model: {0}")]
    Decode(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("threshold search failed: {0}")]
    Bracket(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
