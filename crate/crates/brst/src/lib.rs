//! Exact BRST-type complexes for simple Lie algebras with anomalous
//! (second-class) constraints: ghost Fock space, total and relative
//! differentials, Kaehler structure, Laplacians and cohomology.

pub mod check;
pub mod classical;
pub mod chevalley;
pub mod cohomology;
pub mod conjecture;
pub mod ghost;
pub mod kaehler;
pub mod op;
pub mod report;
pub mod operators;
pub mod root_system;
pub mod space;
pub mod suite;
pub mod weight_module;

pub use root_system::{AnomalyCoefficients, Family, Root, RootDatum, Weight};

#[derive(Debug, thiserror::Error)]
pub enum BrstError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{slice} has dimension {dim}, above the limit {limit}")]
    DimensionLimit { slice: String, dim: usize, limit: usize },
    #[error(transparent)]
    Linalg(#[from] exact_linalg::LinalgError),
    #[error("internal error: {0}")]
    Internal(String),
}
