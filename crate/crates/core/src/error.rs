use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("limit set is empty: mu^-1 + c = {0} <= 0")]
    EmptySet(f64),

    #[error("dense grid of {cells} cells exceeds the budget of {budget}; use the streaming backend")]
    Capacity { cells: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("query at {0:?} falls outside the stored region")]
    OutsideRegion(Vec<f64>),

    #[error("sweep exceeded the row limit {0} before the staircase closed")]
    RowLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
