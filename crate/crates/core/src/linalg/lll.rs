//! Exact LLL reduction of a positive-definite Gram matrix.

use num::{BigInt, BigRational, One, Signed, Zero};

use super::gram::GramMatrix;
use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Lovasz parameter 99/100.
pub fn lll_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

#[derive(Clone, Debug)]
pub struct LllReduction {
    /// `transform * G * transform^T`.
    pub gram: GramMatrix,
    /// Unimodular; row `k` holds the `k`-th reduced basis vector in input coordinates.
    pub transform: IntMatrix,
}

/// Gram-Schmidt data: `mu[i][j]` for `j < i` and squared lengths `b_star[i]`.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub mu: RatMatrix,
    pub b_star: Vec<BigRational>,
}

impl GramSchmidt {
    /// Fails with `NotPositiveDefinite` (1-based index) on a non-positive squared length.
    pub fn of(g: &RatMatrix) -> Result<GramSchmidt> {
        let n = g.rows();
        let mut mu = RatMatrix::zeros(n, n);
        let mut r = RatMatrix::zeros(n, n);
        let mut b_star = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..i {
                let mut v = g[(i, j)].clone();
                for k in 0..j {
                    v -= &mu[(j, k)] * &r[(i, k)];
                }
                mu[(i, j)] = &v / &b_star[j];
                r[(i, j)] = v;
            }
            let mut b = g[(i, i)].clone();
            for k in 0..i {
                b -= &mu[(i, k)] * &r[(i, k)];
            }
            if !b.is_positive() {
                return Err(Error::NotPositiveDefinite { minor: i + 1 });
            }
            mu[(i, i)] = BigRational::one();
            b_star.push(b);
        }
        Ok(GramSchmidt { mu, b_star })
    }
}

pub fn lll_reduce(g: &GramMatrix) -> Result<LllReduction> {
    let n = g.rank();
    let mut gram = g.matrix().clone();
    let mut u = IntMatrix::identity(n);
    if n <= 1 {
        return Ok(LllReduction {
            gram: GramMatrix::new(gram)?,
            transform: u,
        });
    }
    let delta = lll_delta();
    let mut gs = GramSchmidt::of(&gram)?;
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = gs.mu[(k, j)].round();
            if q.is_zero() {
                continue;
            }
            let qi = q.to_integer();
            reduce(&mut gram, &mut u, k, j, &qi);
            for l in 0..j {
                let t = &q * &gs.mu[(j, l)];
                gs.mu[(k, l)] -= t;
            }
            gs.mu[(k, j)] -= &q;
        }
        let m = &gs.mu[(k, k - 1)];
        let lovasz = (&delta - m * m) * &gs.b_star[k - 1];
        if gs.b_star[k] >= lovasz {
            k += 1;
        } else {
            gram.swap_rows(k, k - 1);
            gram.swap_cols(k, k - 1);
            u.swap_rows(k, k - 1);
            gs = GramSchmidt::of(&gram)?;
            k = (k - 1).max(1);
        }
    }
    Ok(LllReduction {
        gram: GramMatrix::new(gram)?,
        transform: u,
    })
}

/// `b_k <- b_k - q b_j` on the Gram matrix and the transform.
fn reduce(gram: &mut RatMatrix, u: &mut IntMatrix, k: usize, j: usize, q: &BigInt) {
    let qr = BigRational::from_integer(q.clone());
    gram.row_sub_multiple(k, j, &qr);
    let n = gram.rows();
    for l in 0..n {
        let t = &qr * &gram[(l, j)];
        gram[(l, k)] -= t;
    }
    u.row_sub_multiple(k, j, q);
}

/// Checks size reduction (|mu| <= 1/2) and the Lovasz condition.
pub fn is_lll_reduced(g: &GramMatrix) -> bool {
    let Ok(gs) = GramSchmidt::of(g.matrix()) else {
        return false;
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = lll_delta();
    let n = g.rank();
    for i in 0..n {
        for j in 0..i {
            if gs.mu[(i, j)].abs() > half {
                return false;
            }
        }
    }
    (1..n).all(|k| {
        let m = &gs.mu[(k, k - 1)];
        gs.b_star[k] >= (&delta - m * m) * &gs.b_star[k - 1]
    })
}
