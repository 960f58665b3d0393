use thiserror::Error;

use crate::data::ValidationReport;
use crate::grids::Family;
use crate::scalar::ParseRationalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseRationalError),

    #[error("{sequence} index {index} out of range (defined for 0..={last})")]
    IndexOutOfRange {
        sequence: &'static str,
        index: usize,
        last: usize,
    },

    #[error("need values up to index {needed}, data stops at {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("invalid data: {0}")]
    Invalid(ValidationReport),

    #[error("polynomials live on different grids")]
    GridMismatch,

    #[error("need {needed} interpolation nodes, grid has {available}")]
    InsufficientNodes { needed: usize, available: usize },

    #[error("nodes a_{first} and a_{second} coincide")]
    RepeatedNodes { first: usize, second: usize },

    #[error("{family} parameters inadmissible at n = {index}: {reason}")]
    Inadmissible {
        family: Family,
        index: usize,
        reason: String,
    },

    #[error("{family} parameters inadmissible: {reason}")]
    InadmissibleParams { family: Family, reason: String },

    #[error("finite case requires tau_{{N+1}} = 0, got tau_{index} = {value}")]
    NotFinite { index: usize, value: String },

    #[error("P_N vanishes at node a_{index}; finite weights undefined")]
    SingularWeight { index: usize },

    #[error("classification needs at least {needed} values, got {available}")]
    TooFewValues { needed: usize, available: usize },
}
