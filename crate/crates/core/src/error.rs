use thiserror::Error;

pub type Result<T> = std::result::Result<T, GridError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid size {0} is too small (need at least {1})")]
    TooSmall(usize, usize),

    #[error("sequences have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),

    #[error("not a permutation of 1..={n}: entry {value} at position {position}")]
    NotAPermutation {
        n: usize,
        position: usize,
        value: usize,
    },

    #[error("black and white dots collide in row {row}")]
    Collision { row: usize },

    #[error("not a derangement: {point} is a fixed point")]
    NotADerangement { point: usize },

    #[error("grid size {n} exceeds the enumeration limit {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("coefficient {requested} requested from a series truncated at order {order}")]
    TruncationTooSmall { requested: usize, order: usize },

    #[error("sample is degenerate (zero variance or too few points)")]
    DegenerateSample,

    #[error("regression design is degenerate")]
    DegenerateDesign,

    #[error("parse error: {0}")]
    Parse(String),
}
