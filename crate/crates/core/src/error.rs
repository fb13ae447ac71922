use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by simulation, analysis and the experiment runner.
///
/// Each variant belongs to one of three classes (configuration, runtime, io)
/// which the command line maps onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid population: need at least 2 agents, got {0}")]
    InvalidPopulation(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid pair: agent {0} cannot trade with itself")]
    InvalidPair(usize),

    #[error("invalid price {0}: prices must be finite and positive")]
    InvalidPrice(f64),

    #[error("degenerate market in period {period}: aggregate demand weight for good y is zero")]
    DegenerateMarket { period: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("replica with seed {seed} failed: {source}")]
    Replica {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed data: {message}", path.display())]
    Data { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 2 for configuration problems,
    /// 3 for runtime failures and 4 for filesystem errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidPopulation(_) => 2,
            Error::Io { .. } => 4,
            Error::Replica { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
