use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: length mismatches, out-of-range symbols, bad parameters.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate code: {0}")]
    Degenerate(String),

    /// An exhaustive enumeration would exceed the caller-supplied cap.
    #[error("enumeration budget exceeded: {what} needs {needed} evaluations, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    /// A closed-form bound was evaluated outside the region where it is defined.
    #[error("formula domain violated: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
