use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("side condition violated: {0}")]
    SideConditionViolated(String),

    #[error("incomplete binding: metavariable `{0}` is unbound")]
    IncompleteBinding(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("no operation table for primitive `{0}`")]
    MissingTable(String),

    #[error("formula uses more than one individual variable ({0})")]
    VariableLimitExceeded(String),

    #[error("variable `{0}` has no value in the assignment")]
    UnboundVariable(String),

    #[error("semantics mismatch: {0}")]
    SemanticsMismatch(String),

    #[error("domain size {0} is not supported here")]
    DomainSizeUnsupported(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{file}:{line}: {message}")]
    Format { file: String, line: usize, message: String },

    #[error("invalid definition: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(file: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            file: file.to_owned(),
            line,
            message: message.into(),
        }
    }
}
