use thiserror::Error;

/// Errors produced by solvers, oracles, and the data/experiment layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {0} is already in the selected set")]
    AlreadySelected(u32),

    #[error("ground set too large for exhaustive verification: n={n}, limit {limit}")]
    TooLargeForExhaustive { n: usize, limit: usize },

    #[error("instance too large for brute force: n={n}, max set size {max_size}")]
    TooLargeForBruteForce { n: usize, max_size: usize },

    #[error("{0}")]
    EmptySelection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix factorization failed even after jitter: {0}")]
    Factorization(String),

    #[error("matroid property violated: {0}")]
    MatroidProperty(String),

    #[error("all probe trials had zero matched distance; Lipschitz ratio undefined")]
    ZeroMatchedDistance,

    #[error("unknown kind: {0}")]
    UnknownKind(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
