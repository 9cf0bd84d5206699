//! Exact integer and rational linear algebra: matrices, Gram matrices, Hermite normal form,
//! LLL reduction, short-vector enumeration and rational solving.

pub mod enumerate;
pub mod gram;
pub mod hnf;
pub mod lll;
pub mod matrix;
pub mod solve;

pub use enumerate::{canonical_sign, enumerate_short_vectors, ShortVector};
pub use gram::GramMatrix;
pub use hnf::{hnf, in_span, span_basis, span_of, Hnf};
pub use lll::{lll_reduce, LllReduction};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use solve::{kernel_integer, kernel_rational, solve_left, solve_rational};
