use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed automaton line or word.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("letter {letter} is outside the alphabet of size {k}")]
    LetterOutOfRange { letter: usize, k: usize },

    #[error("state {state} is outside the valid range 0..{n}")]
    StateOutOfRange { state: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    /// The requested computation needs a table with `2^n` entries and `n`
    /// exceeds the configured limit.
    #[error("{n} states exceed the subset-table limit of {limit} bits")]
    SizeGuard { n: usize, limit: usize },

    #[error("automaton is not synchronizing")]
    NotSynchronizing,

    #[error("automaton is not strongly connected")]
    NotStronglyConnected,

    #[error("letter {0} does not induce a one-cluster transformation")]
    NotOneCluster(usize),

    /// Semigroup enumeration hit its element cap; the answer is unknown.
    #[error("indeterminate: semigroup enumeration exceeded {0} elements")]
    Indeterminate(usize),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
