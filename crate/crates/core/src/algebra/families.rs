//! Standard orders with involution: matrix rings, group rings, triangular rings, truncated
//! polynomial rings, quadratic orders, products and base changes.

use num::{BigRational, One, Zero};

use super::{FiniteDimAlgebra, Involution, InvolutiveOrder};
use crate::error::{Error, Result};
use crate::linalg::matrix::{rat_int, IntMatrix, RatMatrix};

fn unit_vec(dim: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::one();
    v
}

fn permutation_involution(alg: &FiniteDimAlgebra, image: impl Fn(usize) -> usize) -> Involution {
    let d = alg.dim();
    let s = RatMatrix::from_fn(d, d, |i, j| {
        if image(j) == i {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    Involution::new(alg, s).expect("permutation involution is valid")
}

fn order(alg: FiniteDimAlgebra, inv: Involution) -> InvolutiveOrder {
    InvolutiveOrder::new(alg, inv).expect("family member is an order")
}

/// `Z` with the identity involution.
pub fn rationals() -> InvolutiveOrder {
    let alg = FiniteDimAlgebra::new(1, vec![vec![vec![rat_int(1)]]], vec![rat_int(1)])
        .expect("Z is an algebra");
    let inv = Involution::identity(&alg).expect("identity");
    order(alg, inv)
}

/// `M_n(Z)` on the matrix units `E_ab` (index `a n + b`) with the transpose involution.
pub fn matrix_order(n: usize) -> InvolutiveOrder {
    let d = n * n;
    let one = (0..d)
        .map(|k| if k / n == k % n { rat_int(1) } else { rat_int(0) })
        .collect();
    let alg = FiniteDimAlgebra::from_products(d, one, |i, j| {
        let (a, b) = (i / n, i % n);
        let (c, e) = (j / n, j % n);
        if b == c {
            unit_vec(d, a * n + e)
        } else {
            vec![BigRational::zero(); d]
        }
    })
    .expect("matrix ring is an algebra");
    let inv = permutation_involution(&alg, |k| (k % n) * n + k / n);
    order(alg, inv)
}

/// Upper triangular `n x n` integer matrices on `E_ab`, `a <= b`, in lexicographic order, with
/// the transpose along the anti-diagonal.
pub fn upper_triangular(n: usize) -> InvolutiveOrder {
    let units: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .collect();
    let d = units.len();
    let index = |a: usize, b: usize| units.iter().position(|&u| u == (a, b)).unwrap();
    let one = (0..d)
        .map(|k| if units[k].0 == units[k].1 { rat_int(1) } else { rat_int(0) })
        .collect();
    let alg = FiniteDimAlgebra::from_products(d, one, |i, j| {
        let (a, b) = units[i];
        let (c, e) = units[j];
        if b == c {
            unit_vec(d, index(a, e))
        } else {
            vec![BigRational::zero(); d]
        }
    })
    .expect("triangular ring is an algebra");
    let inv = permutation_involution(&alg, |k| {
        let (a, b) = units[k];
        index(n - 1 - b, n - 1 - a)
    });
    order(alg, inv)
}

/// Group ring `Z[G]` for a multiplication table (`table[g][h]` is the index of `gh`, with the
/// identity at index 0) and the involution `g -> g^{-1}`.
pub fn group_ring(table: &[Vec<usize>]) -> InvolutiveOrder {
    let d = table.len();
    let alg = FiniteDimAlgebra::from_products(d, unit_vec(d, 0), |i, j| unit_vec(d, table[i][j]))
        .expect("group ring is an algebra");
    let inverse = |g: usize| (0..d).find(|&h| table[g][h] == 0).expect("group element has an inverse");
    let inv = permutation_involution(&alg, inverse);
    order(alg, inv)
}

pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

pub fn klein_four_table() -> Vec<Vec<usize>> {
    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
}

/// The symmetric group on three letters, elements listed as permutations in lexicographic
/// order (identity first).
pub fn s3_table() -> Vec<Vec<usize>> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                .collect()
        })
        .collect()
}

/// `Z[x]/(x^k)` with the identity involution.
pub fn truncated_polynomial(k: usize) -> InvolutiveOrder {
    let alg = FiniteDimAlgebra::from_products(k, unit_vec(k, 0), |i, j| {
        if i + j < k {
            unit_vec(k, i + j)
        } else {
            vec![BigRational::zero(); k]
        }
    })
    .expect("truncated polynomial ring is an algebra");
    let inv = Involution::identity(&alg).expect("commutative");
    order(alg, inv)
}

/// `Z[w]` with `w^2 = a + b w` on the basis `{1, w}`, with conjugation `w -> b - w`.
pub fn quadratic_order(a: i64, b: i64) -> InvolutiveOrder {
    let alg = FiniteDimAlgebra::from_products(2, unit_vec(2, 0), |i, j| match (i, j) {
        (0, k) | (k, 0) => unit_vec(2, k),
        _ => vec![rat_int(a), rat_int(b)],
    })
    .expect("quadratic order is an algebra");
    let s = RatMatrix::from_i64(&[&[1, b], &[0, -1]]);
    let inv = Involution::new(&alg, s).expect("conjugation is an involution");
    order(alg, inv)
}

/// `Z[i]` with complex conjugation.
pub fn gaussian_integers() -> InvolutiveOrder {
    quadratic_order(-1, 0)
}

/// Direct product; the basis is the concatenation of the factors' bases.
pub fn product(factors: &[InvolutiveOrder]) -> InvolutiveOrder {
    let dims: Vec<usize> = factors.iter().map(InvolutiveOrder::dim).collect();
    let d: usize = dims.iter().sum();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        })
        .collect();
    let locate = |i: usize| {
        let f = offsets.iter().rposition(|&o| o <= i).unwrap();
        (f, i - offsets[f])
    };
    let one = factors.iter().flat_map(|f| f.algebra().one().to_vec()).collect();
    let alg = FiniteDimAlgebra::from_products(d, one, |i, j| {
        let (fi, li) = locate(i);
        let (fj, lj) = locate(j);
        let mut out = vec![BigRational::zero(); d];
        if fi == fj {
            let a = factors[fi].algebra();
            for k in 0..dims[fi] {
                out[offsets[fi] + k] = a.constant(li, lj, k).clone();
            }
        }
        out
    })
    .expect("product is an algebra");
    let blocks: Vec<RatMatrix> = factors.iter().map(|f| f.involution().matrix().clone()).collect();
    let inv = Involution::new(&alg, RatMatrix::block_diagonal(&blocks)).expect("product involution");
    order(alg, inv)
}

/// `Z x Z` with the involution exchanging the factors; not positive.
pub fn swap_involution() -> InvolutiveOrder {
    let p = product(&[rationals(), rationals()]);
    let inv = permutation_involution(p.algebra(), |k| 1 - k);
    order(p.algebra().clone(), inv)
}

/// The same algebra and involution on the basis `f_i = sum_j P[i][j] e_j` (rows of `P`).
pub fn base_change(
    alg: &FiniteDimAlgebra,
    inv: &Involution,
    p: &RatMatrix,
) -> Result<(FiniteDimAlgebra, Involution)> {
    let d = alg.dim();
    if p.rows() != d || p.cols() != d {
        return Err(Error::DimensionMismatch(format!("base change must be {d}x{d}")));
    }
    let pt = p.transpose();
    let to_new = pt
        .inverse()
        .ok_or_else(|| Error::InvalidAlgebra("base change matrix is singular".into()))?;
    let one = to_new.apply(alg.one());
    let new_alg = FiniteDimAlgebra::from_products(d, one, |i, j| {
        to_new.apply(&alg.mul(p.row(i), p.row(j)))
    })?;
    let s = to_new.mul(inv.matrix()).mul(&pt);
    let new_inv = Involution::new(&new_alg, s)?;
    Ok((new_alg, new_inv))
}

/// Base change of an order by a unimodular matrix; the result is again an order.
pub fn base_change_order(o: &InvolutiveOrder, p: &IntMatrix) -> Result<InvolutiveOrder> {
    if !p.is_unimodular() {
        return Err(Error::InvalidOrder("base change of an order must be unimodular".into()));
    }
    let (alg, inv) = base_change(o.algebra(), o.involution(), &p.to_rational())?;
    InvolutiveOrder::new(alg, inv)
}
