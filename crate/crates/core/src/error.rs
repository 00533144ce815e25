use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("config error in `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("numerical consistency failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { key: key.into(), msg: msg.into() }
    }

    /// Prefixes the message with the pipeline stage that failed.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::Parameter(m) => Error::Parameter(format!("[{stage}] {m}")),
            Error::Config { key, msg } => Error::Config { key, msg: format!("[{stage}] {msg}") },
            Error::Numerical(m) => Error::Numerical(format!("[{stage}] {m}")),
            Error::Io(e) => Error::Io(std::io::Error::new(e.kind(), format!("[{stage}] {e}"))),
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// consistency failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Parameter(_) => 2,
            Error::Numerical(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
