use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} = {value} outside [{low}, {high}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        low: f64,
        high: f64,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("unsupported number of objectives: {0}")]
    UnsupportedObjectives(usize),

    #[error("history not ready: {0}")]
    NotReady(&'static str),

    #[error("utility thresholds already initialized")]
    ThresholdsAlreadySet,

    #[error("evaluation budget {budget} smaller than initial population {population}")]
    BudgetTooSmall { budget: usize, population: usize },

    #[error("malformed archive dump: {0}")]
    Parse(String),
}
