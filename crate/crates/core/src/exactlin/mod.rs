//! Exact rational sparse linear algebra.
//!
//! Every quotient, intersection and dimension computed elsewhere in the crate
//! goes through [`Subspace`], which keeps its basis in reduced row-echelon form
//! with pivots chosen on the lowest-index nonzero column. That rule makes the
//! echelon basis (and therefore every chosen coset representative) canonical.

mod rat;
mod sparse;
mod subspace;

pub use rat::{binomial, rat, Rat};
pub use sparse::SparseVec;
pub use subspace::{rref, solve_combination, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}
