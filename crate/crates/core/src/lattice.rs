//! Orthogonal decomposition of positive-definite Z-lattices into indecomposable sublattices.
//!
//! The engine works for any form valued in a finite-dimensional algebra: norms and the
//! enumeration bound come from a positive-definite rational Gram matrix, while orthogonality
//! is decided by a separate integral pairing. For plain lattices the pairing is the (scaled)
//! Gram matrix itself.

use std::cmp::Ordering;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::enumerate::{enumerate_short_vectors, short_vectors_via, ShortVector};
use crate::linalg::gram::GramMatrix;
use crate::linalg::hnf::{span_basis, span_of};
use crate::linalg::lll::lll_reduce;
use crate::linalg::matrix::{dot, IntMatrix, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLattice {
    gram: GramMatrix,
}

impl ZLattice {
    pub fn new(gram: GramMatrix) -> Self {
        ZLattice { gram }
    }

    pub fn from_matrix(m: RatMatrix) -> Result<Self> {
        Ok(ZLattice::new(GramMatrix::new(m)?))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Ok(ZLattice::new(GramMatrix::from_i64(rows)?))
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        self.gram.inner(x, y)
    }

    pub fn norm(&self, x: &[BigInt]) -> BigRational {
        self.gram.norm(x)
    }

    /// The lattice spanned by the rows of `basis`, with its restricted Gram matrix.
    pub fn sublattice(&self, basis: &IntMatrix) -> Result<ZLattice> {
        Ok(ZLattice::new(self.gram.restrict(basis)?))
    }

    /// The same lattice on the basis given by the rows of the unimodular `u`: Gram `U G U^T`.
    pub fn rebased(&self, u: &IntMatrix) -> Result<ZLattice> {
        if !u.is_unimodular() {
            return Err(Error::DimensionMismatch("change of basis must be unimodular".into()));
        }
        self.sublattice(u)
    }
}

/// A sublattice given by its HNF basis (rows, ambient coordinates) and restricted Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub basis: IntMatrix,
    pub gram: RatMatrix,
}

impl Block {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoDecomposition {
    pub blocks: Vec<Block>,
}

impl OrthoDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn spans(&self) -> Vec<IntMatrix> {
        self.blocks.iter().map(|b| b.basis.clone()).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::rank).collect()
    }
}

/// Integral pairing `f(x, y)_k = x M_k y^T`, a positive multiple of the form whose vanishing
/// defines orthogonality.
#[derive(Clone, Debug)]
pub(crate) struct PairingForm {
    mats: Vec<IntMatrix>,
}

impl PairingForm {
    pub(crate) fn new(mats: Vec<IntMatrix>) -> Self {
        PairingForm { mats }
    }

    pub(crate) fn from_gram(g: &GramMatrix) -> Self {
        PairingForm::new(vec![g.scaled_integral()])
    }

    /// The row vectors `x M_k`, so that pairing against `y` is a dot product.
    fn images(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        self.mats.iter().map(|m| m.left_apply(x)).collect()
    }

    pub(crate) fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.mats.iter().map(|m| m.bilinear(x, y)).collect()
    }

    pub(crate) fn orthogonal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.pair(x, y).iter().all(Zero::is_zero)
    }

    pub(crate) fn spans_orthogonal(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        a.row_iter()
            .all(|x| b.row_iter().all(|y| self.orthogonal(x, y)))
    }
}

fn pair_images(images: &[Vec<BigInt>], y: &[BigInt]) -> Vec<BigInt> {
    images.iter().map(|w| dot(w, y)).collect()
}

/// `y` splits off `x` orthogonally (`f(y, x - y) = 0`, up to the sign of `y`).
fn splits(images_y: &[Vec<BigInt>], self_y: &[BigInt], x: &[BigInt]) -> bool {
    let yx = pair_images(images_y, x);
    yx == self_y || yx.iter().zip(self_y).all(|(a, b)| *a == -b)
}

struct Prepared {
    vectors: Vec<ShortVector>,
    images: Vec<Vec<Vec<BigInt>>>,
    self_pairs: Vec<Vec<BigInt>>,
}

fn prepare(vectors: Vec<ShortVector>, form: &PairingForm) -> Prepared {
    let images: Vec<_> = vectors.iter().map(|v| form.images(&v.coords)).collect();
    let self_pairs = vectors
        .iter()
        .zip(&images)
        .map(|(v, w)| pair_images(w, &v.coords))
        .collect();
    Prepared {
        vectors,
        images,
        self_pairs,
    }
}

impl Prepared {
    fn split_witness(&self, x: &[BigInt], norm: &BigRational) -> Option<usize> {
        (0..self.vectors.len()).find(|&j| {
            self.vectors[j].norm < *norm && splits(&self.images[j], &self.self_pairs[j], x)
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Canonical block order: by rank, then lexicographically on the HNF entries.
pub(crate) fn compare_spans(a: &IntMatrix, b: &IntMatrix) -> Ordering {
    a.rows()
        .cmp(&b.rows())
        .then_with(|| a.entries().cmp(b.entries()))
}

/// The indecomposable components as sorted HNF bases.
///
/// `gram` supplies norms (and must be positive definite); `form` decides orthogonality.
pub(crate) fn decompose_spans(gram: &GramMatrix, form: &PairingForm) -> Result<Vec<IntMatrix>> {
    let n = gram.rank();
    if n == 0 {
        return Ok(Vec::new());
    }
    let red = lll_reduce(gram)?;
    let bound = red.gram.max_diagonal();
    let short = prepare(short_vectors_via(&red.gram, &red.transform, &bound)?, form);

    let primitive: Vec<usize> = (0..short.vectors.len())
        .filter(|&i| {
            let v = &short.vectors[i];
            short.split_witness(&v.coords, &v.norm).is_none()
        })
        .collect();

    let mut uf = UnionFind((0..primitive.len()).collect());
    for (a, &i) in primitive.iter().enumerate() {
        for (b, &j) in primitive.iter().enumerate().skip(a + 1) {
            let p = pair_images(&short.images[i], &short.vectors[j].coords);
            if p.iter().any(|x| !x.is_zero()) {
                uf.union(a, b);
            }
        }
    }
    let mut components: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; primitive.len()];
    for (a, &i) in primitive.iter().enumerate() {
        let r = uf.find(a);
        let slot = *root_slot[r].get_or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[slot].push(short.vectors[i].coords.clone());
    }
    let mut spans: Vec<IntMatrix> = components.iter().map(|c| span_basis(c, n)).collect();

    // Bounded-norm connectivity can split a component; merge spans until pairwise orthogonal.
    'merge: loop {
        for i in 0..spans.len() {
            for j in i + 1..spans.len() {
                if !form.spans_orthogonal(&spans[i], &spans[j]) {
                    let b = spans.remove(j);
                    let a = spans.remove(i);
                    spans.push(span_of(&a.stack(&b)));
                    continue 'merge;
                }
            }
        }
        break;
    }

    let total: usize = spans.iter().map(IntMatrix::rows).sum();
    if total != n {
        return Err(Error::InternalIncomplete(format!(
            "block ranks sum to {total}, expected {n}"
        )));
    }
    let stacked = spans
        .iter()
        .fold(IntMatrix::from_rows(Vec::new(), n), |acc, s| acc.stack(s));
    if !stacked.det().abs().is_one() {
        return Err(Error::InternalIncomplete(
            "blocks do not span the whole lattice".into(),
        ));
    }
    spans.sort_by(compare_spans);
    Ok(spans)
}

fn blocks_of(lattice: &ZLattice, spans: Vec<IntMatrix>) -> Result<OrthoDecomposition> {
    let blocks = spans
        .into_iter()
        .map(|basis| {
            let gram = lattice.gram().restrict(&basis)?.into_matrix();
            Ok(Block { basis, gram })
        })
        .collect::<Result<_>>()?;
    Ok(OrthoDecomposition { blocks })
}

/// The unique decomposition into indecomposable orthogonal sublattices.
pub fn decompose(lattice: &ZLattice) -> Result<OrthoDecomposition> {
    let spans = decompose_spans(lattice.gram(), &PairingForm::from_gram(lattice.gram()))?;
    blocks_of(lattice, spans)
}

pub fn is_indecomposable(lattice: &ZLattice) -> Result<bool> {
    Ok(decompose(lattice)?.len() == 1)
}

/// A vector `y` (up to sign, taken from `short`) with `norm(y) < norm(x)` and `f(y, x - y) = 0`,
/// i.e. an orthogonal split `x = y + (x - y)` into nonzero parts.
pub fn split_witness(
    lattice: &ZLattice,
    x: &[BigInt],
    short: &[ShortVector],
    bound: &BigRational,
) -> Result<Option<Vec<BigInt>>> {
    let norm = lattice.norm(x);
    if norm > *bound {
        return Err(Error::BoundTooSmall {
            norm: norm.to_string(),
            bound: bound.to_string(),
        });
    }
    let g = lattice.gram();
    Ok(short
        .iter()
        .filter(|y| y.norm < norm)
        .find_map(|y| {
            let yx = g.inner(&y.coords, x);
            if yx == y.norm {
                Some(y.coords.clone())
            } else if yx == -&y.norm {
                Some(y.coords.iter().map(|c| -c).collect())
            } else {
                None
            }
        }))
}

/// `x` admits no orthogonal split into nonzero parts. `short` must hold every vector of norm up
/// to `bound` (one per sign), as returned by `enumerate_short_vectors`.
pub fn is_primitive(
    lattice: &ZLattice,
    x: &[BigInt],
    short: &[ShortVector],
    bound: &BigRational,
) -> Result<bool> {
    if x.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    Ok(split_witness(lattice, x, short, bound)?.is_none())
}

/// Convenience wrapper enumerating up to `norm(x)` first.
pub fn is_primitive_vector(lattice: &ZLattice, x: &[BigInt]) -> Result<bool> {
    let bound = lattice.norm(x);
    if !bound.is_positive() {
        return Ok(false);
    }
    let short = enumerate_short_vectors(lattice.gram(), &bound)?;
    is_primitive(lattice, x, &short, &bound)
}

/// Independent audit of pairwise orthogonality, unimodular completeness, HNF-presented bases,
/// matching restricted Grams and indecomposability of every block.
pub fn verify_decomposition(lattice: &ZLattice, d: &OrthoDecomposition) -> bool {
    let n = lattice.rank();
    let form = PairingForm::from_gram(lattice.gram());
    for (i, a) in d.blocks.iter().enumerate() {
        if a.basis.cols() != n || a.rank() == 0 || span_of(&a.basis) != a.basis {
            return false;
        }
        match lattice.gram().restrict(&a.basis) {
            Ok(g) if *g.matrix() == a.gram => {}
            _ => return false,
        }
        if d.blocks[i + 1..]
            .iter()
            .any(|b| !form.spans_orthogonal(&a.basis, &b.basis))
        {
            return false;
        }
    }
    let stacked = d
        .blocks
        .iter()
        .fold(IntMatrix::from_rows(Vec::new(), n), |acc, b| acc.stack(&b.basis));
    if stacked.rows() != n || !stacked.is_unimodular() {
        return false;
    }
    d.blocks.iter().all(|b| {
        ZLattice::from_matrix(b.gram.clone())
            .and_then(|l| is_indecomposable(&l))
            .unwrap_or(false)
    })
}

/// Sum of the ranks and `det` of the stacked bases, for callers that only need completeness.
pub fn is_complete(n: usize, spans: &[IntMatrix]) -> bool {
    let stacked = spans
        .iter()
        .fold(IntMatrix::from_rows(Vec::new(), n), |acc, s| acc.stack(s));
    stacked.rows() == n && stacked.det().abs() == BigInt::one()
}
