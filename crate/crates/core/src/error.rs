use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every variant maps onto one of three severities (see [`ErrorKind`]); the
/// command-line front end turns those into exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("polynomial {poly:?} is reducible over a field of size {field_size}")]
    Reducible { poly: Vec<u32>, field_size: u64 },

    #[error("attempted to invert zero")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generator matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration of {count} subspaces exceeds the budget of {budget}")]
    Budget { count: u128, budget: u64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("invalid document: {0}")]
    Document(String),
}

/// Severity class of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or a violated precondition.
    Domain,
    /// An enumeration or search budget was exceeded.
    Resource,
    /// Two sides of an equivalence evaluated differently.
    Consistency,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Budget { .. } => ErrorKind::Resource,
            Error::Consistency(_) => ErrorKind::Consistency,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
