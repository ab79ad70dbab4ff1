//! Exact linear algebra over the rationals.
//!
//! Subspaces are kept in reduced row echelon form with the pivot of each row
//! at its first nonzero entry, so equal subspaces have identical bases.
//! Elimination is fraction-free on cleared integer rows, with a fixed-width
//! fast path that falls back to big integers on overflow.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{Matrix, Vector};
pub use scalar::Scalar;
pub use subspace::{image, kernel, rank, restricted_kernel, rref, rref_rows, Subspace};
