use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Precondition,
    Resource,
    Numerical,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("direction undefined at {0}")]
    UndefinedDirection(String),
    #[error("stencil error: {0}")]
    Stencil(String),
    #[error("value {requested} lies beyond the cutoff {cutoff}")]
    OutOfCutoff { requested: f64, cutoff: f64 },
    #[error("budget of {budget} exceeded after {completed_depth} complete generations")]
    Budget { budget: usize, completed_depth: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Usage(_) => ErrorKind::Usage,
            Error::Budget { .. } => ErrorKind::Resource,
            Error::Numerical(_) | Error::Stencil(_) => ErrorKind::Numerical,
            Error::Precondition(_)
            | Error::Domain(_)
            | Error::Singularity(_)
            | Error::Pole(_)
            | Error::UndefinedDirection(_)
            | Error::OutOfCutoff { .. } => ErrorKind::Precondition,
        }
    }
}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
