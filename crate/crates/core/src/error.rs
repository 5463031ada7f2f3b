use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every observation carrying positive weight has the same value, so the
    /// Fréchet likelihood has no interior maximizer.
    #[error("no unique maximizer: all weighted observations are identical")]
    NoUniqueMaximizer,

    #[error("root bracketing failed on [{lo}, {hi}]: psi({lo}) = {psi_lo}, psi({hi}) = {psi_hi}")]
    BracketingFailed {
        lo: f64,
        hi: f64,
        psi_lo: f64,
        psi_hi: f64,
    },

    #[error("no Kesten index: {0}")]
    NoKestenIndex(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("line {line}: cannot parse {content:?} as a number")]
    Parse { line: usize, content: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
