use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frame mismatch: {left} elements vs {right} elements")]
    FrameMismatch { left: u8, right: u8 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("total conflict (k = {conflict}); combination is undefined")]
    TotalConflict { conflict: f64 },

    #[error("degenerate start: initial entropy is zero, cannot normalize")]
    DegenerateStart,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("run seed {seed}: {source}")]
    Run {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FrameMismatch { .. } => "frame_mismatch",
            Error::Domain(_) => "domain",
            Error::TotalConflict { .. } => "total_conflict",
            Error::DegenerateStart => "degenerate_start",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Run { source, .. } => source.kind(),
        }
    }
}
