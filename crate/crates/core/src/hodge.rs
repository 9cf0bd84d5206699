//! Polarised integral Hodge structures of type {(-1,0),(0,-1)}: a lattice `Z^{2g}` with a rational
//! complex structure `J` and an integral alternating form `psi`. The endomorphism order with
//! its Rosati involution drives the unique decomposition into indecomposable pieces.

use num::{BigInt, BigRational, Zero};

use crate::algebra::{
    check_positive_involution, FiniteDimAlgebra, Involution, InvolutiveOrder,
};
use crate::error::{Error, Result};
use crate::hermitian::coordinates_in;
use crate::idempotent::{decompose_unity, idempotents_from_blocks, left_ideal};
use crate::lattice::{compare_spans, is_complete};
use crate::linalg::gram::first_nonpositive_minor;
use crate::linalg::hnf::span_of;
use crate::linalg::matrix::{to_integer_vec, IntMatrix, RatMatrix};
use crate::linalg::solve::kernel_integer;

/// `J` and `psi` act on coordinate columns: `psi(x, y) = x^T psi y`, `x -> J x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarisedComplexStructure {
    j: RatMatrix,
    psi: IntMatrix,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidHodgeStructure(msg.into())
}

impl PolarisedComplexStructure {
    /// Checks `J^2 = -1`, `psi^T = -psi`, `psi(Jx, Jy) = psi(x, y)` and that
    /// `phi(x, y) = psi(x, J y)` is symmetric positive definite.
    pub fn new(j: RatMatrix, psi: IntMatrix) -> Result<Self> {
        let n = j.rows();
        if n == 0 || n % 2 != 0 || j.cols() != n || psi.rows() != n || psi.cols() != n {
            return Err(invalid("J and psi must be square of the same even size"));
        }
        if j.mul(&j) != RatMatrix::identity(n).neg() {
            return Err(invalid("J^2 != -1"));
        }
        if psi.transpose() != psi.neg() {
            return Err(invalid("psi is not alternating"));
        }
        let p = psi.to_rational();
        if j.transpose().mul(&p).mul(&j) != p {
            return Err(invalid("psi(Jx, Jy) != psi(x, y)"));
        }
        let phi = p.mul(&j);
        if !phi.is_symmetric() {
            return Err(invalid("psi(x, Jy) is not symmetric"));
        }
        if let Some(k) = first_nonpositive_minor(&phi) {
            return Err(invalid(format!(
                "psi(x, Jy) is not positive definite (leading minor {k})"
            )));
        }
        Ok(PolarisedComplexStructure { j, psi })
    }

    pub fn genus(&self) -> usize {
        self.j.rows() / 2
    }

    pub fn rank(&self) -> usize {
        self.j.rows()
    }

    pub fn j(&self) -> &RatMatrix {
        &self.j
    }

    pub fn psi(&self) -> &IntMatrix {
        &self.psi
    }

    /// `phi = psi J`, the positive-definite Riemann form.
    pub fn riemann_form(&self) -> RatMatrix {
        self.psi.to_rational().mul(&self.j)
    }

    /// Orthogonal sum: block-diagonal `J` and `psi`.
    pub fn product(factors: &[PolarisedComplexStructure]) -> Result<Self> {
        let js: Vec<RatMatrix> = factors.iter().map(|f| f.j.clone()).collect();
        let ps: Vec<IntMatrix> = factors.iter().map(|f| f.psi.clone()).collect();
        PolarisedComplexStructure::new(RatMatrix::block_diagonal(&js), IntMatrix::block_diagonal(&ps))
    }

    /// The same structure on the basis given by the rows of the unimodular `p`: coordinates
    /// transform as `x_old = p^T x_new`, so `J' = p^{-T} J p^T` and `psi' = p psi p^T`.
    pub fn rebased(&self, p: &IntMatrix) -> Result<Self> {
        let p_inv = p
            .unimodular_inverse()
            .ok_or_else(|| invalid("change of basis must be unimodular"))?;
        let pr = p.to_rational();
        let j = p_inv.transpose().to_rational().mul(&self.j).mul(&pr.transpose());
        let psi = p.mul(&self.psi).mul(&p.transpose());
        PolarisedComplexStructure::new(j, psi)
    }

    /// Restriction to the sublattice spanned by the rows of `basis`, or `None` when it is not
    /// `J`-stable.
    pub fn restrict(&self, basis: &IntMatrix) -> Option<(RatMatrix, IntMatrix)> {
        let k = basis.rows();
        let b = basis.to_rational();
        let mut cols = Vec::with_capacity(k);
        for v in b.row_iter() {
            cols.push(coordinates_in(basis, &self.j.apply(v))?);
        }
        let j = RatMatrix::from_rows(cols, k).transpose();
        let psi = basis.mul(&self.psi).mul(&basis.transpose());
        Some((j, psi))
    }
}

/// The integral commutant of `J` with its Rosati involution, as an abstract order together
/// with the endomorphism matrices of its basis.
#[derive(Clone, Debug)]
pub struct EndomorphismOrder {
    pub order: InvolutiveOrder,
    pub basis: Vec<IntMatrix>,
}

impl EndomorphismOrder {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `sum_k x_k a_k`.
    pub fn element_matrix(&self, x: &[BigInt]) -> IntMatrix {
        let n = self.basis[0].rows();
        x.iter()
            .zip(&self.basis)
            .fold(IntMatrix::zeros(n, n), |acc, (c, a)| acc.add(&a.scale(c)))
    }
}

fn flatten(m: &IntMatrix) -> Vec<BigInt> {
    m.entries().to_vec()
}

/// `R = {a in M_{2g}(Z) : aJ = Ja}` with `a* = psi^{-1} a^T psi`.
pub fn endomorphism_order(h: &PolarisedComplexStructure) -> Result<EndomorphismOrder> {
    let n = h.rank();
    let j = h.j();
    // equation (r, c) of aJ - Ja = 0 in the unknowns a[p][q] (index p n + q)
    let eqs = RatMatrix::from_fn(n * n, n * n, |row, var| {
        let (r, c) = (row / n, row % n);
        let (p, q) = (var / n, var % n);
        let mut v = BigRational::zero();
        if p == r {
            v += &j[(q, c)];
        }
        if q == c {
            v -= &j[(r, p)];
        }
        v
    });
    let kernel = kernel_integer(&eqs);
    let d = kernel.rows();
    let basis: Vec<IntMatrix> = kernel
        .row_iter()
        .map(|r| IntMatrix::from_rows(r.chunks(n).map(<[BigInt]>::to_vec).collect(), n))
        .collect();

    let coords = |m: &IntMatrix| -> Result<Vec<BigInt>> {
        let x = crate::linalg::matrix::to_rational_vec(&flatten(m));
        coordinates_in(&kernel, &x)
            .and_then(|c| to_integer_vec(&c))
            .ok_or_else(|| invalid("endomorphism lattice is not closed"))
    };
    let mut constants = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for k in 0..d {
            let c = coords(&basis[i].mul(&basis[k]))?;
            constants[i][k] = crate::linalg::matrix::to_rational_vec(&c);
        }
    }
    let one = crate::linalg::matrix::to_rational_vec(&coords(&IntMatrix::identity(n))?);
    let alg = FiniteDimAlgebra::new(d, constants, one)?;

    let psi = h.psi().to_rational();
    let psi_inv = psi.inverse().ok_or_else(|| invalid("psi is degenerate"))?;
    let mut star_cols = Vec::with_capacity(d);
    for a in &basis {
        let s = psi_inv.mul(&a.to_rational().transpose()).mul(&psi);
        let s = s
            .to_integer()
            .ok_or_else(|| invalid("Rosati involution does not preserve the endomorphism order"))?;
        star_cols.push(crate::linalg::matrix::to_rational_vec(&coords(&s)?));
    }
    let s = RatMatrix::from_rows(star_cols, d).transpose();
    let inv = Involution::new(&alg, s)?;
    if !check_positive_involution(&alg, &inv) {
        return Err(invalid("Rosati involution is not positive"));
    }
    let order = InvolutiveOrder::new(alg, inv)?;
    Ok(EndomorphismOrder { order, basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeBlock {
    /// HNF basis (rows, ambient coordinates).
    pub basis: IntMatrix,
    /// `J` restricted to the block, on its basis.
    pub j: RatMatrix,
    /// `psi` restricted to the block, on its basis.
    pub psi: IntMatrix,
    /// The Hermitian idempotent projecting onto the block, as an endomorphism matrix.
    pub projector: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDecomposition {
    pub blocks: Vec<HodgeBlock>,
}

impl HodgeDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn spans(&self) -> Vec<IntMatrix> {
        self.blocks.iter().map(|b| b.basis.clone()).collect()
    }
}

/// The unique decomposition `L = L_1 + ... + L_r` with `L_nu = i_nu L` for the indecomposable
/// Hermitian idempotents `i_nu` of the endomorphism order. Blocks are sorted by rank, then
/// lexicographically on their HNF bases.
pub fn decompose_hodge(h: &PolarisedComplexStructure) -> Result<HodgeDecomposition> {
    let end = endomorphism_order(h)?;
    let unity = decompose_unity(&end.order)?;
    let mut blocks = Vec::with_capacity(unity.idems.len());
    for i in &unity.idems {
        let projector = end.element_matrix(i);
        let basis = span_of(&projector.transpose());
        let (j, psi) = h.restrict(&basis).ok_or_else(|| {
            Error::InternalInvariantFailure("block is not J-stable".into())
        })?;
        PolarisedComplexStructure::new(j.clone(), psi.clone()).map_err(|e| {
            Error::InternalInvariantFailure(format!("restricted structure is invalid: {e}"))
        })?;
        blocks.push(HodgeBlock {
            basis,
            j,
            psi,
            projector,
        });
    }
    blocks.sort_by(|a, b| compare_spans(&a.basis, &b.basis));
    let d = HodgeDecomposition { blocks };
    if !verify_hodge_decomposition(h, &d) {
        return Err(Error::InternalInvariantFailure(
            "Hodge decomposition failed its audit".into(),
        ));
    }
    Ok(d)
}

/// `J`-stability, vanishing of `psi` across blocks, unimodular completeness, and positivity of
/// `psi(x, Jy)` on every block; stored restrictions must match.
pub fn verify_hodge_decomposition(h: &PolarisedComplexStructure, d: &HodgeDecomposition) -> bool {
    let n = h.rank();
    let spans = d.spans();
    if spans.iter().any(|s| s.cols() != n || s.rows() == 0) || !is_complete(n, &spans) {
        return false;
    }
    for (a, block) in d.blocks.iter().enumerate() {
        let Some((j, psi)) = h.restrict(&block.basis) else {
            return false;
        };
        if j != block.j || psi != block.psi {
            return false;
        }
        let phi = psi.to_rational().mul(&j);
        if !phi.is_symmetric() || first_nonpositive_minor(&phi).is_some() {
            return false;
        }
        for other in &d.blocks[a + 1..] {
            if !block.basis.mul(h.psi()).mul(&other.basis.transpose()).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Projections onto each block along the others, recovered from the block bases alone.
pub fn projectors_from_blocks(n: usize, spans: &[IntMatrix]) -> Option<Vec<RatMatrix>> {
    let stacked = spans
        .iter()
        .fold(IntMatrix::from_rows(Vec::new(), n), |acc, s| acc.stack(s));
    // a column vector x has block coordinates c = (B^T)^{-1} x
    let bt = stacked.to_rational().transpose();
    let bt_inv = bt.inverse()?;
    let mut out = Vec::with_capacity(spans.len());
    let mut offset = 0;
    for s in spans {
        let k = s.rows();
        let select = RatMatrix::from_fn(n, n, |r, c| {
            if r == c && (offset..offset + k).contains(&r) {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        });
        out.push(bt.mul(&select).mul(&bt_inv));
        offset += k;
    }
    Some(out)
}

/// The block/idempotent correspondence closes up: projectors recomputed from the block spans
/// equal the idempotents that produced them, and the idempotents recovered from the left
/// ideals `R i_nu` of the endomorphism order are the same set.
pub fn verify_round_trip(h: &PolarisedComplexStructure, d: &HodgeDecomposition) -> Result<bool> {
    let n = h.rank();
    let Some(projectors) = projectors_from_blocks(n, &d.spans()) else {
        return Ok(false);
    };
    if projectors
        .iter()
        .zip(&d.blocks)
        .any(|(p, b)| *p != b.projector.to_rational())
    {
        return Ok(false);
    }
    let end = endomorphism_order(h)?;
    let unity = decompose_unity(&end.order)?;
    let ideals: Vec<IntMatrix> = unity.idems.iter().map(|i| left_ideal(&end.order, i)).collect();
    let back = idempotents_from_blocks(&end.order, &ideals)?;
    if back != unity {
        return Ok(false);
    }
    let mut from_blocks: Vec<IntMatrix> = d.blocks.iter().map(|b| b.projector.clone()).collect();
    let mut from_order: Vec<IntMatrix> = back.idems.iter().map(|i| end.element_matrix(i)).collect();
    from_blocks.sort_by(|a, b| a.entries().cmp(b.entries()));
    from_order.sort_by(|a, b| a.entries().cmp(b.entries()));
    Ok(from_blocks == from_order)
}

/// Curves `C / (Z + Z c i)` with `J` and the principal polarisation on the basis `{1, c i}`.
pub fn cm_curve(c: i64) -> PolarisedComplexStructure {
    let j = RatMatrix::from_fn(2, 2, |r, k| match (r, k) {
        (0, 1) => BigRational::from_integer((-c).into()),
        (1, 0) => BigRational::new(1.into(), c.into()),
        _ => BigRational::zero(),
    });
    PolarisedComplexStructure::new(j, IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]))
        .expect("CM curve is a valid structure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;

    #[test]
    fn gaussian_curve() {
        let e = cm_curve(1);
        assert_eq!(e.riemann_form(), RatMatrix::identity(2));
        let end = endomorphism_order(&e).unwrap();
        assert_eq!(end.rank(), 2);
        let d = decompose_hodge(&e).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.blocks[0].basis, IntMatrix::identity(2));
        assert!(verify_round_trip(&e, &d).unwrap());
    }

    #[test]
    fn rejects_invalid_structures() {
        let psi = IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        assert!(PolarisedComplexStructure::new(RatMatrix::identity(2), psi.clone()).is_err());
        let j = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        // wrong sign of psi makes psi(x, Jy) negative definite
        assert!(PolarisedComplexStructure::new(j.clone(), psi.neg()).is_err());
        assert!(PolarisedComplexStructure::new(j, IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn two_curve_product_splits_into_planes() {
        let h = PolarisedComplexStructure::product(&[cm_curve(1), cm_curve(2)]).unwrap();
        // both curves have CM by orders of Q(i), so they are isogenous and Hom between them is
        // nonzero: the endomorphism order has rank 2 + 2 + 2 + 2
        assert_eq!(endomorphism_order(&h).unwrap().rank(), 8);
        let d = decompose_hodge(&h).unwrap();
        assert_eq!(
            d.spans(),
            vec![
                IntMatrix::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
                IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
            ]
        );
        assert!(verify_round_trip(&h, &d).unwrap());
    }

    #[test]
    fn non_stable_planes_fail_verification() {
        let h = PolarisedComplexStructure::product(&[cm_curve(1), cm_curve(1)]).unwrap();
        let basis = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert!(h.restrict(&basis).is_none());
        let d = decompose_hodge(&h).unwrap();
        assert_eq!(d.len(), 2);
        let mut broken = d.clone();
        broken.blocks[0].basis = basis;
        assert!(!verify_hodge_decomposition(&h, &broken));
        assert!(verify_hodge_decomposition(&h, &d));
    }

    #[test]
    fn rebasing_transports_blocks() {
        let h = PolarisedComplexStructure::product(&[cm_curve(1), cm_curve(2)]).unwrap();
        let p = IntMatrix::from_i64(&[&[1, 1, 0, 0], &[2, 3, 0, 2], &[0, -1, 1, -3], &[1, 1, 1, 0]]);
        assert!(p.is_unimodular());
        let h2 = h.rebased(&p).unwrap();
        let d1 = decompose_hodge(&h).unwrap();
        let d2 = decompose_hodge(&h2).unwrap();
        let p_inv = p.unimodular_inverse().unwrap();
        let mut moved: Vec<IntMatrix> = d1.spans().iter().map(|s| span_of(&s.mul(&p_inv))).collect();
        moved.sort_by(compare_spans);
        assert_eq!(moved, d2.spans());
        let _ = int_vec(&[0]);
    }
}
