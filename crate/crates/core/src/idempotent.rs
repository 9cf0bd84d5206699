//! Decomposition of unity in an order with positive involution into indecomposable, pairwise
//! orthogonal Hermitian idempotents, through the left ideals `R i` of the regular module.

use num::{BigInt, BigRational, One, Zero};

use crate::algebra::{require_positive_involution, InvolutiveOrder};
use crate::error::{Error, Result};
use crate::hermitian::{coordinates_in, decompose_hermitian, HermitianModule};
use crate::linalg::hnf::span_basis;
use crate::linalg::matrix::{to_integer_vec, to_rational_vec, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentDecomposition {
    /// Coordinates in the order basis, in descending lexicographic order.
    pub idems: Vec<Vec<BigInt>>,
}

fn mul(r: &InvolutiveOrder, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let p = r
        .algebra()
        .mul(&to_rational_vec(x), &to_rational_vec(y));
    to_integer_vec(&p).expect("order is closed under multiplication")
}

fn star(r: &InvolutiveOrder, x: &[BigInt]) -> Vec<BigInt> {
    r.involution_int().apply(x)
}

fn is_zero(x: &[BigInt]) -> bool {
    x.iter().all(Zero::is_zero)
}

/// The first violated condition among `i^2 = i`, `i* = i`, `i != 0`, pairwise orthogonality and
/// `sum = 1`.
fn idempotent_violation(r: &InvolutiveOrder, idems: &[Vec<BigInt>]) -> Option<String> {
    let d = r.dim();
    for (k, i) in idems.iter().enumerate() {
        if i.len() != d {
            return Some(format!("idempotent {k} must have length {d}"));
        }
        if is_zero(i) {
            return Some(format!("idempotent {k} is zero"));
        }
        if mul(r, i, i) != *i {
            return Some(format!("idempotent {k} does not satisfy i^2 = i"));
        }
        if star(r, i) != *i {
            return Some(format!("idempotent {k} does not satisfy i* = i"));
        }
    }
    for (a, i) in idems.iter().enumerate() {
        for (b, j) in idems.iter().enumerate() {
            if a != b && !is_zero(&mul(r, i, &star(r, j))) {
                return Some(format!("idempotents {a} and {b} are not orthogonal"));
            }
        }
    }
    let sum = idems.iter().fold(vec![BigInt::zero(); d], |acc, i| {
        acc.iter().zip(i).map(|(a, b)| a + b).collect()
    });
    if sum != r.one_int() {
        return Some("idempotents do not sum to 1".into());
    }
    None
}

/// The left ideal `R i = span{e_j i}` as an HNF basis.
pub fn left_ideal(r: &InvolutiveOrder, i: &[BigInt]) -> IntMatrix {
    let d = r.dim();
    let rows: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            let mut e = vec![BigInt::zero(); d];
            e[j] = BigInt::one();
            mul(r, &e, i)
        })
        .collect();
    span_basis(&rows, d)
}

/// `L_nu = R i_nu` for a complete family of orthogonal Hermitian idempotents.
pub fn blocks_from_idempotents(r: &InvolutiveOrder, idems: &[Vec<BigInt>]) -> Result<Vec<IntMatrix>> {
    if let Some(v) = idempotent_violation(r, idems) {
        return Err(Error::InvalidIdempotents(v));
    }
    Ok(idems.iter().map(|i| left_ideal(r, i)).collect())
}

/// The components of `1` in the direct sum of the given left ideals.
pub fn idempotents_from_blocks(
    r: &InvolutiveOrder,
    blocks: &[IntMatrix],
) -> Result<IdempotentDecomposition> {
    let d = r.dim();
    let stacked = blocks
        .iter()
        .fold(IntMatrix::from_rows(Vec::new(), d), |acc, b| acc.stack(b));
    if stacked.rows() != d || stacked.det().is_zero() {
        return Err(Error::NoSolution);
    }
    let c = coordinates_in(&stacked, r.algebra().one()).ok_or(Error::NoSolution)?;
    let mut idems = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for b in blocks {
        let k = b.rows();
        let part: Vec<BigRational> = b
            .to_rational()
            .left_apply(&c[offset..offset + k]);
        offset += k;
        let part = to_integer_vec(&part).ok_or_else(|| {
            Error::InvalidIdempotents("component of 1 is not integral".into())
        })?;
        idems.push(part);
    }
    if let Some(v) = idempotent_violation(r, &idems) {
        return Err(Error::InvalidIdempotents(v));
    }
    idems.sort_by(|a, b| b.cmp(a));
    Ok(IdempotentDecomposition { idems })
}

/// The unique decomposition `1 = i_1 + ... + i_r` into indecomposable orthogonal Hermitian
/// idempotents. Requires the involution to be positive.
pub fn decompose_unity(r: &InvolutiveOrder) -> Result<IdempotentDecomposition> {
    require_positive_involution(r.algebra(), r.involution())?;
    let module = HermitianModule::regular(r)?;
    let blocks = decompose_hermitian(&module)?.spans();
    let out = idempotents_from_blocks(r, &blocks).map_err(|e| {
        Error::InternalInvariantFailure(format!("idempotents from blocks: {e}"))
    })?;
    for i in &out.idems {
        if !is_indecomposable_idempotent(r, i)? {
            return Err(Error::InternalInvariantFailure(format!(
                "idempotent {i:?} is decomposable"
            )));
        }
    }
    Ok(out)
}

/// `i` admits no splitting `i = j + k` into nonzero orthogonal Hermitian idempotents, decided
/// by decomposing the left ideal `R i` as a Hermitian module.
pub fn is_indecomposable_idempotent(r: &InvolutiveOrder, i: &[BigInt]) -> Result<bool> {
    if i.len() != r.dim() || is_zero(i) || mul(r, i, i) != i || star(r, i) != i {
        return Err(Error::InvalidIdempotents(
            "expected a nonzero Hermitian idempotent".into(),
        ));
    }
    let module = HermitianModule::regular(r)?;
    let ideal = module.restrict(&left_ideal(r, i))?;
    Ok(decompose_hermitian(&ideal)?.len() == 1)
}

/// Audit of all invariants of a decomposition of unity.
pub fn verify_idempotents(r: &InvolutiveOrder, d: &IdempotentDecomposition) -> bool {
    idempotent_violation(r, &d.idems).is_none()
        && d.idems
            .iter()
            .all(|i| is_indecomposable_idempotent(r, i).unwrap_or(false))
}
