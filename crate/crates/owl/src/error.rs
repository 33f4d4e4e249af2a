use std::io;
use std::path::PathBuf;

/// Errors from the tools layer. [`Error::exit_code`] maps each to the CLI
/// convention: 1 for bad input, 2 for failures at run time.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: {source}", path.display())]
    InvalidWeights {
        path: PathBuf,
        line: usize,
        source: owl_core::Error,
    },
    #[error(transparent)]
    Core(#[from] owl_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("step {step:e} is too large; it must be below {limit:e}")]
    StepTooLarge { step: f64, limit: f64 },
    #[error(
        "conjugate gradient stalled after {iterations} iterations (relative residual {residual:e})"
    )]
    CgDivergence { iterations: usize, residual: f64 },
    #[error(
        "cannot allocate {bytes} bytes for the design matrix; lower --d \
         (each step of d adds 1000 rows and columns, d = 10 needs about 800 MB)"
    )]
    OutOfMemory { bytes: usize },
    #[error("{0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::InvalidWeights { .. }
            | Error::StepTooLarge { .. }
            | Error::InvalidConfig(_) => 1,
            Error::Core(e) => match e {
                owl_core::Error::NoMergeOccurred
                | owl_core::Error::BranchExhaustion { .. }
                | owl_core::Error::NoKktPoint { .. } => 2,
                _ => 1,
            },
            Error::Io { .. } | Error::CgDivergence { .. } | Error::OutOfMemory { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
