use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] cvxgraph::Error),

    #[error("{failed} of {total} {what} did not converge")]
    NonConvergence {
        what: &'static str,
        failed: u64,
        total: u64,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 2 for bad input, 3 for instances over a size cap, 4 for solver
    /// non-convergence, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use cvxgraph::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::NonConvergence { .. } => 4,
            CliError::Write { .. } => 1,
            CliError::Core(e) => match e {
                E::TooLarge { .. } => 3,
                E::NoConvergence { .. } => 4,
                E::Io(_) => 1,
                E::DimensionMismatch { .. }
                | E::InvalidArgument(_)
                | E::Parse { .. }
                | E::UnknownGraph(_)
                | E::Config(_)
                | E::Json(_) => 2,
            },
        }
    }
}
