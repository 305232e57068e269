use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Mittag-Leffler evaluation failed for alpha={alpha}, beta={beta}, z={z}")]
    Evaluation { alpha: f64, beta: f64, z: f64 },

    #[error("range error: {0}")]
    Range(String),

    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("{0}")]
    Assumption(String),

    #[error("nonlocal resolvent is singular in mode {mode}")]
    SingularResolvent { mode: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("malformed nonsmooth term: {0}")]
    TermDefinition(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::Validation { .. }
            | Error::Assumption(_)
            | Error::Parse { .. }
            | Error::Domain(_)
            | Error::Contract(_)
            | Error::TermDefinition(_) => 1,
            Error::Evaluation { .. }
            | Error::Range(_)
            | Error::SingularResolvent { .. }
            | Error::Numeric(_)
            | Error::Resolution(_) => 2,
        }
    }
}
