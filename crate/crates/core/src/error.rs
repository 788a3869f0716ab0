use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error(
        "matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e} exceeds tolerance {tol:e}"
    )]
    AsymmetricBeyondTolerance {
        i: usize,
        j: usize,
        gap: f64,
        tol: f64,
    },

    #[error("non-finite entry at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("matrix has dimension zero")]
    Empty,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("permutation is not a bijection on 0..{n}")]
    InvalidPermutation { n: usize },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite (pivot {pivot})")]
    NotPsd { pivot: usize },

    #[error("diagonal pivoting broke down at step {step}: a 2x2 pivot block would be required")]
    PivotBreakdown { step: usize },

    #[error("reports describe matrices of different dimension ({first} and {other})")]
    MixedInputs { first: usize, other: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
