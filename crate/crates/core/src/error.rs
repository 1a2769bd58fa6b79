use std::path::PathBuf;

/// Errors raised by the samplers, summaries and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the domain of a function or distribution.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The DL marginal density is infinite at the origin.
    #[error("density is singular at theta = 0")]
    Singularity,

    /// Bad configuration or input data.
    #[error("validation error: {0}")]
    Validation(String),

    /// A chain reached a numerically degenerate state.
    #[error("degenerate state at iteration {iteration}: {detail}")]
    Degenerate { iteration: usize, detail: String },

    /// Malformed input file.
    #[error("parse error at line {line}: {detail}")]
    Parse { line: u64, detail: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn validation(detail: impl Into<String>) -> Self {
        Error::Validation(detail.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad input or configuration, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. }
            | Error::Singularity
            | Error::Validation(_)
            | Error::Parse { .. } => 1,
            Error::Degenerate { .. } | Error::Io { .. } | Error::Serialize(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
