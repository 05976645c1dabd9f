use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point lies outside the box")]
    PointOutsideBox,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("point {0} is not a lattice point")]
    NotLattice(String),

    #[error("oracle limit: {what} of {size} exceeds the limit of {limit}; use bounds mode")]
    OracleLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cannot sample from zero total weight")]
    ZeroWeight,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Protocol(_) | Error::Invariant(_) => 2,
            Error::OracleLimit { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}
