//! Exact integer linear algebra.

mod dense;
mod echelon;

pub use dense::{bareiss_determinant, integer_kernel, smith_invariants};
pub use echelon::{combine, Echelon, SparseVec};
