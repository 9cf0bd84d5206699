use num::{BigInt, BigRational, Zero};

use super::hnf::{hnf, span_basis};
use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Exact solution of `M x = b`. Free variables are set to zero when the system is
/// underdetermined.
pub fn solve_rational(m: &RatMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    assert_eq!(m.rows(), b.len(), "right-hand side length mismatch");
    let (rows, cols) = (m.rows(), m.cols());
    let aug = RatMatrix::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (red, pivots) = reduced_row_echelon(aug, cols);
    for i in pivots.len()..rows {
        if !red[(i, cols)].is_zero() {
            return Err(Error::NoSolution);
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[(r, cols)].clone();
    }
    Ok(x)
}

/// Coefficients `c` with `c * M = target`, i.e. `target` as a combination of the rows of `M`.
pub fn solve_left(m: &RatMatrix, target: &[BigRational]) -> Result<Vec<BigRational>> {
    solve_rational(&m.transpose(), target)
}

/// Reduced row echelon form restricted to pivots in the first `pivot_cols` columns.
fn reduced_row_echelon(mut a: RatMatrix, pivot_cols: usize) -> (RatMatrix, Vec<usize>) {
    let rows = a.rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for x in a.row_mut(r) {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let q = a[(i, c)].clone();
                a.row_sub_multiple(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis (rows) of the rational kernel `{x : M x = 0}`.
pub fn kernel_rational(m: &RatMatrix) -> RatMatrix {
    let cols = m.cols();
    let (red, pivots) = reduced_row_echelon(m.clone(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let rows = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::from_integer(BigInt::from(1));
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -red[(r, f)].clone();
            }
            v
        })
        .collect();
    RatMatrix::from_rows(rows, cols)
}

/// HNF basis of the integer kernel `{x in Z^n : M x = 0}` of a rational matrix. The result
/// is saturated: it is the full intersection of the rational kernel with `Z^n`.
pub fn kernel_integer(m: &RatMatrix) -> IntMatrix {
    let d = BigRational::from_integer(m.common_denominator());
    let mi = m.map(|x| (x * &d).to_integer());
    // U * M^T = [H; 0]; the rows of U against the zero rows span the kernel.
    let h = hnf(&mi.transpose());
    let rank = h.basis.rows();
    let rows: Vec<Vec<BigInt>> = (rank..mi.cols())
        .map(|i| h.transform.row(i).to_vec())
        .collect();
    span_basis(&rows, mi.cols())
}
