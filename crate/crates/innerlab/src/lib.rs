//! Experiment runner for `innerlab-core`: model files, configs, CSV output,
//! a rayon expander, the `innerlab` binary and the acceptance suite.

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod experiments;
pub mod format;
pub mod parallel;
pub mod table;

pub use config::ExperimentConfig;
pub use format::ModelSpec;
pub use table::Table;

use innerlab_core::ErrorKind;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] innerlab_core::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl Error {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) => match e.kind() {
                ErrorKind::Usage => 64,
                ErrorKind::Precondition => 2,
                ErrorKind::Resource => 3,
                ErrorKind::Numerical => 4,
            },
            Error::Usage(_) => 64,
            Error::Io(..) | Error::Csv(_) | Error::Pool(_) => 3,
        }
    }
}
