use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("nilpotency step {step} exceeds supported BCH depth {depth}")]
    DepthExceeded { step: usize, depth: usize },
    #[error("orbit is not flat: {0}")]
    NotFlat(String),
    #[error("degenerate orbit: {0}")]
    Degenerate(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownGroup(String),
    #[error("no representation model for {0}")]
    NoRepresentation(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("symbol support touches the singular set Pf = 0: {0}")]
    SupportMargin(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
