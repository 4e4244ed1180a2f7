use thiserror::Error;

use crate::interval::IntervalError;
use crate::mapdsl::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed at {location}: {source}")]
    Evaluation { location: String, source: EvalError },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("a single hole gives index 0; the holed-ball theorem yields nothing")]
    SingleHole,
    #[error("point lies outside the cone shell")]
    OutsideShell,
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("unsupported functional: {0}")]
    UnsupportedFunctional(String),
    #[error("the field x - f(x) may vanish at an endpoint")]
    BoundaryZero,
    #[error("could not verify that x - f(x) is nonzero on the boundary (max depth {depth})")]
    BoundaryZeroOrIndeterminate { depth: usize },
    #[error("no crossing: {0}")]
    NoCrossing(String),
    #[error("fixed point index is only available in dimensions 1 and 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn eval(location: impl Into<String>, source: EvalError) -> Self {
        Error::Evaluation { location: location.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
