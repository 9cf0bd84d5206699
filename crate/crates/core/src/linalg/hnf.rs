//! Row-style Hermite normal form over the integers.
//!
//! Conventions: rows are ordered by strictly increasing pivot column, pivots are positive,
//! entries above a pivot lie in `[0, pivot)`, zero rows are dropped. Two integer matrices
//! have row spans that coincide exactly when their HNFs are equal.

use num::{BigInt, Integer, One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    /// The nonzero rows of the normal form.
    pub basis: IntMatrix,
    /// Unimodular `m x m` matrix with `transform * M = [basis; 0]`.
    pub transform: IntMatrix,
}

/// Hermite normal form with the unimodular transform.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let r = echelonize(&mut a, Some(&mut u));
    Hnf {
        basis: IntMatrix::from_rows(a.to_rows().into_iter().take(r).collect(), m.cols()),
        transform: u,
    }
}

/// HNF basis of the Z-span of `rows` (vectors of length `cols`).
///
/// Large generating sets are folded in chunks so intermediate entries stay small.
pub fn span_basis(rows: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    let mut basis = IntMatrix::from_rows(Vec::new(), cols);
    let chunk = cols.max(1);
    for part in rows.chunks(chunk) {
        let mut a = basis.stack(&IntMatrix::from_rows(part.to_vec(), cols));
        let r = echelonize(&mut a, None);
        basis = IntMatrix::from_rows(a.to_rows().into_iter().take(r).collect(), cols);
    }
    basis
}

/// HNF of the row span of `m`.
pub fn span_of(m: &IntMatrix) -> IntMatrix {
    span_basis(&m.to_rows(), m.cols())
}

/// Membership of `v` in the row span of an HNF basis.
pub fn in_span(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in h.row_iter() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if v[..p].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = v[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        for (x, r) in v.iter_mut().zip(row) {
            *x -= &q * r;
        }
    }
    v.iter().all(Zero::is_zero)
}

/// Brings `a` into HNF in place and returns its rank; row operations are mirrored on `u`.
fn echelonize(a: &mut IntMatrix, mut u: Option<&mut IntMatrix>) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        // Euclid on the column: repeatedly use the smallest nonzero entry as pivot.
        loop {
            let pivot = (row..m)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&i, &j| a[(i, col)].abs().cmp(&a[(j, col)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(row, p);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(row, p);
            }
            let mut done = true;
            for i in row + 1..m {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = a[(i, col)].div_floor(&a[(row, col)]);
                a.row_sub_multiple(i, row, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.row_sub_multiple(i, row, &q);
                }
                if !a[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(row, col)].is_zero() {
            continue;
        }
        if a[(row, col)].is_negative() {
            negate_row(a, row);
            if let Some(u) = u.as_deref_mut() {
                negate_row(u, row);
            }
        }
        for i in 0..row {
            let q = a[(i, col)].div_floor(&a[(row, col)]);
            a.row_sub_multiple(i, row, &q);
            if let Some(u) = u.as_deref_mut() {
                u.row_sub_multiple(i, row, &q);
            }
        }
        row += 1;
    }
    row
}

fn negate_row(a: &mut IntMatrix, i: usize) {
    for x in a.row_mut(i) {
        *x = -x.clone();
    }
}

/// True when `h` satisfies the normal-form conventions above.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    for (i, row) in h.row_iter().enumerate() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if last.is_some_and(|l| p <= l) || !row[p].is_positive() {
            return false;
        }
        for k in 0..i {
            let e = &h[(k, p)];
            if e.is_negative() || e >= &row[p] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

/// The index `[Z^n : span]` of a full-rank HNF basis, or `None` when the rank is deficient.
pub fn index_in_ambient(h: &IntMatrix) -> Option<BigInt> {
    if h.rows() != h.cols() {
        return None;
    }
    Some((0..h.rows()).fold(BigInt::one(), |acc, i| acc * &h[(i, i)]))
}
