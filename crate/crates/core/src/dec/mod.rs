//! Discrete forms and the operators `d`, `⋆`, `δ` as sparse matrices.

mod calculus;
mod cochain;
mod operator;

pub use calculus::{
    codifferential, exterior_derivative, hodge_star, ibp_residual, inner_product,
    Causality,
};
pub use cochain::{Cochain, Placement};
pub use operator::{OperatorKind, OperatorMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecError {
    #[error("degree {degree} out of range for a {dim}-dimensional complex")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("cochain has {actual} values, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error("zero primal measure on {dim}-cell {index}")]
    ZeroPrimalMeasure { dim: usize, index: usize },
    #[error("zero dual measure on the dual of {dim}-cell {index}; cannot invert")]
    ZeroDualMeasure { dim: usize, index: usize },
    #[error("non-positive star entry {value:e} on {dim}-cell {index}")]
    NonPositiveStar { dim: usize, index: usize, value: f64 },
    #[error("causality has {actual} entries, expected {expected}")]
    CausalityLength { expected: usize, actual: usize },
}
