//! Fincke-Pohst enumeration of short lattice vectors, exact throughout.

use num::{BigInt, BigRational, Signed, Zero};

use super::gram::GramMatrix;
use super::lll::{lll_reduce, GramSchmidt};
use super::matrix::IntMatrix;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<BigInt>,
    pub norm: BigRational,
}

/// One representative of every pair `{v, -v}` with `0 < v G v^T <= bound`, in input
/// coordinates. Each representative has its first nonzero coordinate positive; the list is
/// sorted by norm, then lexicographically.
pub fn enumerate_short_vectors(g: &GramMatrix, bound: &BigRational) -> Result<Vec<ShortVector>> {
    let red = lll_reduce(g)?;
    short_vectors_via(&red.gram, &red.transform, bound)
}

pub(crate) fn sort_canonical(v: &mut [ShortVector]) {
    v.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
}

pub fn leading_sign_positive(v: &[BigInt]) -> bool {
    v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_positive())
}

/// `v` or `-v`, whichever has a positive first nonzero coordinate.
pub fn canonical_sign(v: &[BigInt]) -> Vec<BigInt> {
    if leading_sign_positive(v) || v.iter().all(Zero::is_zero) {
        v.to_vec()
    } else {
        v.iter().map(|x| -x).collect()
    }
}

/// Every nonzero `x` (both signs) with `x G x^T <= bound`, with its norm, in the coordinates
/// of `g` itself. Works best when `g` is already reduced.
pub fn enumerate_all(g: &GramMatrix, bound: &BigRational) -> Result<Vec<(Vec<BigInt>, BigRational)>> {
    let gs = GramSchmidt::of(g.matrix())?;
    let n = g.rank();
    let mut out = Vec::new();
    if n == 0 || !bound.is_positive() {
        return Ok(out);
    }
    let mut x = vec![BigInt::zero(); n];
    descend(&gs, bound, n - 1, BigRational::zero(), &mut x, &mut out);
    Ok(out)
}

fn descend(
    gs: &GramSchmidt,
    bound: &BigRational,
    level: usize,
    partial: BigRational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<(Vec<BigInt>, BigRational)>,
) {
    let n = x.len();
    let mut shift = BigRational::zero();
    for j in level + 1..n {
        if !x[j].is_zero() {
            shift += &gs.mu[(j, level)] * BigRational::from_integer(x[j].clone());
        }
    }
    let remaining = bound - &partial;
    let b = &gs.b_star[level];
    let cost = |xi: &BigInt| -> BigRational {
        let t = BigRational::from_integer(xi.clone()) + &shift;
        b * &t * &t
    };
    // The admissible x_i form an interval around -shift; if it holds any integer it holds
    // the nearest one.
    let center = (-&shift).round().to_integer();
    let mut visit = |xi: BigInt, c: BigRational, x: &mut Vec<BigInt>| {
        x[level] = xi;
        let p = &partial + c;
        if level == 0 {
            if !p.is_zero() {
                out.push((x.clone(), p));
            }
        } else {
            descend(gs, bound, level - 1, p, x, out);
        }
    };
    let c0 = cost(&center);
    if c0 > remaining {
        x[level] = BigInt::zero();
        return;
    }
    visit(center.clone(), c0, x);
    let mut up = &center + 1;
    loop {
        let c = cost(&up);
        if c > remaining {
            break;
        }
        visit(up.clone(), c, x);
        up += 1;
    }
    let mut down = &center - 1;
    loop {
        let c = cost(&down);
        if c > remaining {
            break;
        }
        visit(down.clone(), c, x);
        down -= 1;
    }
    x[level] = BigInt::zero();
}

/// Short vectors of a Gram matrix given together with a reducing transform, returned in the
/// coordinates of the unreduced matrix.
pub(crate) fn short_vectors_via(
    reduced: &GramMatrix,
    transform: &IntMatrix,
    bound: &BigRational,
) -> Result<Vec<ShortVector>> {
    let mut out: Vec<ShortVector> = enumerate_all(reduced, bound)?
        .into_iter()
        .map(|(x, norm)| (transform.left_apply(&x), norm))
        .filter(|(v, _)| leading_sign_positive(v))
        .map(|(coords, norm)| ShortVector { coords, norm })
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}
