//! Exact rational sparse linear algebra: rank, nullspace, subspace
//! intersection and positive-definiteness certificates.

pub mod elim;
pub mod io;
pub mod matrix;
pub mod modp;
pub mod posdef;
pub mod rational;

pub use elim::{intersect, inverse, nullspace, primitive, rank, rank_exact, solve, Echelon, SubspaceBasis};
pub use io::{read_csv, write_csv};
pub use matrix::{sparse_axpy, sparse_dot, sparse_from_entries, sparse_scale, SparseMatrix, SparseVec};
pub use posdef::{certify_positive_definite, symmetric_blocks};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("ambient dimension mismatch: {expected} vs {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("csv: {0}")]
    Csv(String),
}
