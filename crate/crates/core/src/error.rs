use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variants split into two families: domain errors (bad input, violated
/// preconditions) and [`Error::NumericalFailure`], which signals that a
/// computation lost the accuracy its postcondition promises.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Verblunsky coefficient: {0}")]
    InvalidCoefficient(String),
    #[error("point lies outside the gap arc: {0}")]
    OutOfGap(String),
    #[error("root is not admissible for the cone constants: {0}")]
    Inadmissible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("monodromy is not hyperbolic: normalized trace {0}")]
    NotHyperbolic(f64),
    #[error("size limit exceeded: {what} = {got} (limit {limit})")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),
    #[error("singular evaluation: {0}")]
    Singularity(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// True for errors that indicate lost accuracy rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
