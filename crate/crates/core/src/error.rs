use thiserror::Error;

/// Errors produced by the library.
///
/// Variants fall into three groups that the command-line front end maps to
/// distinct exit codes: malformed input, computations refused by a size
/// guard, and internal consistency failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a valid Latin column: {0:?}")]
    InvalidColumn(Vec<usize>),
    #[error("not a valid Latin rectangle: {0}")]
    InvalidRectangle(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("too many rows: i = {i} exceeds m = {m}")]
    TooManyRows { i: usize, m: usize },
    #[error("cannot project single row")]
    CannotProject,
    #[error("row count mismatch: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("{what} too large: estimated {estimate} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        estimate: u128,
        cap: u128,
    },
    #[error("γ requires even m (got m = {0})")]
    OddDegree(usize),
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported basis image")]
    UnsupportedBasis,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by a feasibility guard rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
