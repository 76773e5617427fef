//! Arbitrary-precision scalars and dense linear algebra.
//!
//! Everything in the solver runs on [`BigScalar`] values created under a
//! [`PrecisionContext`] that fixes the number of significant decimal digits
//! carried by every operation. The collocation systems solved here have
//! condition numbers in the 10^500..10^730 range, so the working precision
//! (800-1200 digits for the built-in problems) is the entire stability
//! strategy: there is no pivot-growth control beyond partial pivoting and no
//! iterative refinement.
//!
//! Determinism contract: all reductions (dot products, norms, sums) run in a
//! fixed ascending-index order and every elementary operation is correctly
//! rounded at context precision, so results are bit-identical across runs and
//! thread counts.

mod dense;
mod lu;
mod onenorm;
mod scalar;

pub use dense::{DenseMatrix, DenseVector};
pub(crate) use lu::factor_in_place;
pub use lu::{lu_factor, lu_solve, lu_solve_transpose, residual_inf_norm, LUFactors};
pub use onenorm::{cond_estimate, cond_estimate_with_factors};
pub use scalar::{BigScalar, PrecisionContext};

use thiserror::Error;

/// Minimum number of significant decimal digits a context may carry.
pub const MIN_DIGITS: u32 = 50;

#[derive(Debug, Error)]
pub enum PrecisionError {
    #[error("precision contexts must carry at least {MIN_DIGITS} digits, got {0}")]
    TooFewDigits(u32),
    #[error("cannot parse {input:?} as a decimal scalar: {reason}")]
    Parse { input: String, reason: String },
    #[error("non-finite scalar is not representable here ({0})")]
    NonFinite(String),
}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is singular at working precision: pivot column {col} is exactly zero")]
    SingularMatrix { col: usize },
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}
