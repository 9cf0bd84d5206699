use num::{BigInt, BigRational, Signed, Zero};

use super::matrix::{common_denominator, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Symmetric positive-definite rational Gram matrix `G[i][j] = f(b_i, b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix(RatMatrix);

impl GramMatrix {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if let Some((row, col)) = m.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        if let Some(minor) = first_nonpositive_pivot(&m) {
            return Err(Error::NotPositiveDefinite { minor });
        }
        Ok(GramMatrix(m))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        GramMatrix::new(RatMatrix::from_i64(rows))
    }

    pub fn rank(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.0[(i, j)]
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for j in 0..n {
                if !y[j].is_zero() {
                    row += &self.0[(i, j)] * BigRational::from_integer(y[j].clone());
                }
            }
            acc += row * BigRational::from_integer(x[i].clone());
        }
        acc
    }

    pub fn norm(&self, x: &[BigInt]) -> BigRational {
        self.inner(x, x)
    }

    /// Gram matrix of the rows of `p` (`P G P^T`). Positive definite whenever the rows are independent.
    pub fn restrict(&self, p: &IntMatrix) -> Result<GramMatrix> {
        GramMatrix::new(self.0.congruent(&p.to_rational()))
    }

    /// `c * G` scaled to an integer matrix by the lcm `c` of all denominators.
    pub fn scaled_integral(&self) -> IntMatrix {
        let d = common_denominator(self.0.entries());
        let d = BigRational::from_integer(d);
        self.0.map(|x| (x * &d).to_integer())
    }

    pub fn det(&self) -> BigRational {
        self.0.det()
    }

    pub fn max_diagonal(&self) -> BigRational {
        (0..self.rank())
            .map(|i| self.0[(i, i)].clone())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// Positive-definiteness by leading principal minors. Returns the 1-based index of the
/// first non-positive minor.
pub fn first_nonpositive_minor(m: &RatMatrix) -> Option<usize> {
    m.leading_minors()
        .iter()
        .position(|d| !d.is_positive())
        .map(|k| k + 1)
}

/// Cholesky-style test: symmetric Gaussian elimination without pivoting. The k-th pivot is
/// the ratio of consecutive leading minors, so the first non-positive pivot has the same
/// index as the first non-positive minor.
pub fn first_nonpositive_pivot(m: &RatMatrix) -> Option<usize> {
    ldl_pivots(m).1
}

/// LDL^T pivots of a symmetric matrix, stopping at the first non-positive one.
fn ldl_pivots(m: &RatMatrix) -> (RatMatrix, Option<usize>) {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n {
        if !a[(k, k)].is_positive() {
            return (a, Some(k + 1));
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let q = &a[(i, k)] / &pivot;
            a.row_sub_multiple(i, k, &q);
        }
    }
    (a, None)
}

/// For a symmetric matrix that is not positive definite, a nonzero integer vector `x` with
/// `x M x^T <= 0`. Built from the first non-positive LDL^T pivot.
pub fn nonpositive_witness(m: &RatMatrix) -> Option<Vec<BigInt>> {
    let n = m.rows();
    // Unit lower-triangular L with M_k = L D L^T on the leading block; x = L^{-T} e_k gives
    // x M x^T = d_k.
    let mut l = RatMatrix::identity(n);
    let mut a = m.clone();
    let mut bad = None;
    for k in 0..n {
        if !a[(k, k)].is_positive() {
            bad = Some(k);
            break;
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let q = &a[(i, k)] / &pivot;
            l[(i, k)] = q.clone();
            a.row_sub_multiple(i, k, &q);
        }
    }
    let k = bad?;
    // Solve L^T x = e_k on the leading (k+1) block by back substitution.
    let mut x = vec![BigRational::zero(); n];
    x[k] = BigRational::from_integer(BigInt::from(1));
    for i in (0..k).rev() {
        let mut s = BigRational::zero();
        for j in i + 1..=k {
            s += &l[(j, i)] * &x[j];
        }
        x[i] = -s;
    }
    Some(primitive_integer_multiple(&x))
}

/// The primitive integer vector on the ray through a nonzero rational vector.
pub fn primitive_integer_multiple(x: &[BigRational]) -> Vec<BigInt> {
    use num::Integer;
    let d = BigRational::from_integer(common_denominator(x));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * &d).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}
