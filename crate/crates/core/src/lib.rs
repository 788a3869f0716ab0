//! Difference-of-PSD representations of real symmetric matrices.
//!
//! Any symmetric `A` can be written as `P₊ − P₋` with both parts positive
//! semidefinite. This crate implements four ways of doing so and the
//! scorecard used to compare them:
//!
//! - [`simple::shift_split`]: identity shift, `A + tI` against `tI` (or the
//!   mirrored form),
//! - [`simple::eigen_split`]: split of the spectrum via a Jacobi eigensolver,
//! - [`ldl::ldl_split`]: diagonal-pivoting LDLᵀ with the negative pivots moved
//!   into the second factor,
//! - [`chtwo::chtwo`]: difference-of-Cholesky, a Cholesky recursion that
//!   emits two lower-triangular factors and stays total on singular and
//!   indefinite inputs through δ-regularized steps.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and
//! the command-line front end live in the `psdsplit` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod chtwo;
pub mod eigen;
mod error;
pub mod generate;
pub mod ldl;
pub mod matrix;
pub mod metrics;
pub mod pair;
pub mod pivot;
pub mod simple;

pub use chtwo::{chtwo, Branch, ChtwoConfig, PivotLog, PivotRecord, VPolicy};
pub use eigen::{gershgorin_bounds, jacobi_eigen, nuclear_norm, EigenDecomposition};
pub use error::{Error, Result};
pub use ldl::{cholesky, ldl, ldl_split, LdlFactorization};
pub use matrix::{
    reconstruct_difference, sym_from_dense, sym_from_row_major, DiagMatrix, LowerTriangular,
    Permutation, SymMatrix,
};
pub use metrics::{compare, curvature_overhead, evaluate, DecompositionReport};
pub use pair::{Method, PairForm, PsdPair};
pub use pivot::PivotStrategy;
pub use simple::{eigen_split, shift_split, shift_split_with, ShiftBound};
