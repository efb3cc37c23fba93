//! Dense real linear algebra for the small matrices that show up in MIMO
//! detection: Householder QR, one-sided Jacobi SVD, condition numbers,
//! triangular solves and the unit-triangular/diagonal split of `R`.

mod matrix;
mod qr;
pub(crate) mod svd;

pub use matrix::Matrix;
pub use qr::{back_substitute, qr_factorize, split_r, QrFactors, RSplit};
pub use svd::{condition_number, pseudo_inverse, singular_values, svd, Svd};

use thiserror::Error;

/// Relative tolerance for orthogonality and reconstruction checks.
pub const TOL_RECON: f64 = 1e-10;

/// Relative rank threshold: a pivot or singular value below
/// `TOL_RANK * scale` is treated as zero.
pub const TOL_RANK: f64 = 1e-12;

/// Cap on Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("expected {expected} entries for the given shape, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is rank deficient (pivot {pivot} has magnitude {magnitude:e})")]
    RankDeficient { pivot: usize, magnitude: f64 },
    #[error("diagonal entry {index} is singular ({value:e})")]
    SingularDiagonal { index: usize, value: f64 },
    #[error("zero matrix has no condition number")]
    ZeroMatrix,
    #[error("Jacobi SVD did not converge within {0} sweeps")]
    NoConvergence(usize),
}
