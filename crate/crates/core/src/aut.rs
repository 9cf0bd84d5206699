//! Isometry groups and isometry tests for small definite lattices by backtracking over short
//! vectors, and the check that `Aut(L)` permutes the indecomposable blocks as a product of
//! wreath factors.

use std::collections::{HashMap, HashSet, VecDeque};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{decompose, Block, ZLattice};
use crate::linalg::enumerate::enumerate_all;
use crate::linalg::gram::GramMatrix;
use crate::linalg::hnf::span_of;
use crate::linalg::lll::lll_reduce;
use crate::linalg::matrix::{common_denominator, dot, IntMatrix, RatMatrix};

pub const DEFAULT_MAX_RANK: usize = 8;

/// Isometries `U` with `U G U^T = G`, acting on row vectors by `x -> x U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryGroup {
    pub generators: Vec<IntMatrix>,
    pub order: BigInt,
}

fn guard(rank: usize, limit: usize) -> Result<()> {
    if rank > limit {
        return Err(Error::RankTooLarge { rank, limit });
    }
    Ok(())
}

fn scale_all(ms: &[&RatMatrix]) -> Vec<IntMatrix> {
    let all: Vec<BigRational> = ms.iter().flat_map(|m| m.entries().to_vec()).collect();
    let d = BigRational::from_integer(common_denominator(&all));
    ms.iter().map(|m| m.map(|x| (x * &d).to_integer())).collect()
}

/// All vectors (both signs) of norm at most `bound`, with their images under the scaled Gram
/// matrix for fast inner products.
struct Pool {
    vecs: Vec<Vec<BigInt>>,
    w: Vec<Vec<BigInt>>,
    norms: Vec<BigInt>,
    index: HashMap<Vec<BigInt>, usize>,
}

impl Pool {
    fn new(gram: &GramMatrix, scaled: &IntMatrix, bound: &BigRational) -> Result<Pool> {
        let vecs: Vec<Vec<BigInt>> = enumerate_all(gram, bound)?
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        let w: Vec<Vec<BigInt>> = vecs.iter().map(|v| scaled.left_apply(v)).collect();
        let norms = vecs.iter().zip(&w).map(|(v, w)| dot(v, w)).collect();
        let index = vecs.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Ok(Pool {
            vecs,
            w,
            norms,
            index,
        })
    }

    fn inner(&self, a: usize, b: usize) -> BigInt {
        dot(&self.w[a], &self.vecs[b])
    }
}

/// Backtracking for rows `x_0, .., x_{n-1}` from the pool whose Gram matrix is `target`.
struct Search<'a> {
    target: &'a IntMatrix,
    pool: &'a Pool,
}

impl Search<'_> {
    fn candidates(&self, images: &[usize]) -> Vec<usize> {
        let k = images.len();
        (0..self.pool.vecs.len())
            .filter(|&c| {
                self.pool.norms[c] == self.target[(k, k)]
                    && images
                        .iter()
                        .enumerate()
                        .all(|(j, &img)| self.pool.inner(c, img) == self.target[(k, j)])
            })
            .collect()
    }

    /// Extends `images` to a full solution; returns the first one found.
    fn first(&self, images: &mut Vec<usize>) -> Option<Vec<usize>> {
        if images.len() == self.target.rows() {
            return Some(images.clone());
        }
        for c in self.candidates(images) {
            images.push(c);
            if let Some(found) = self.first(images) {
                images.pop();
                return Some(found);
            }
            images.pop();
        }
        None
    }

    fn matrix(&self, images: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(
            images.iter().map(|&i| self.pool.vecs[i].clone()).collect(),
            self.target.cols(),
        )
    }
}

/// `P^{-1} M P` for unimodular `P`.
fn conjugate(p: &IntMatrix, p_inv: &IntMatrix, m: &IntMatrix) -> IntMatrix {
    p_inv.mul(m).mul(p)
}

pub fn aut_group(lattice: &ZLattice) -> Result<IsometryGroup> {
    aut_group_with_limit(lattice, DEFAULT_MAX_RANK)
}

/// Full isometry group: generators and exact order, from a stabilizer chain along an
/// LLL-reduced basis. The orbit of each basis vector under the pointwise stabilizer of the
/// earlier ones is found by closing under known generators and searching for an isometry
/// reaching every remaining candidate.
pub fn aut_group_with_limit(lattice: &ZLattice, limit: usize) -> Result<IsometryGroup> {
    let n = lattice.rank();
    guard(n, limit)?;
    if n == 0 {
        return Ok(IsometryGroup {
            generators: Vec::new(),
            order: BigInt::one(),
        });
    }
    let red = lll_reduce(lattice.gram())?;
    let scaled = scale_all(&[red.gram.matrix()]).remove(0);
    let pool = Pool::new(&red.gram, &scaled, &red.gram.max_diagonal())?;
    let search = Search {
        target: &scaled,
        pool: &pool,
    };
    let basis: Vec<usize> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            pool.index[&e]
        })
        .collect();

    let mut gens: Vec<IntMatrix> = Vec::new();
    let mut order = BigInt::one();
    for k in (0..n).rev() {
        let mut fixed: Vec<usize> = basis[..k].to_vec();
        let candidates = search.candidates(&fixed);
        let mut orbit: HashSet<usize> = HashSet::from([basis[k]]);
        close_orbit(&mut orbit, &gens, &pool);
        for c in candidates {
            if orbit.contains(&c) {
                continue;
            }
            fixed.push(c);
            if let Some(images) = search.first(&mut fixed) {
                gens.push(search.matrix(&images));
                close_orbit(&mut orbit, &gens, &pool);
            }
            fixed.pop();
        }
        order *= BigInt::from(orbit.len());
    }

    let t = &red.transform;
    let t_inv = t.unimodular_inverse().expect("LLL transform is unimodular");
    let generators = gens.iter().map(|m| conjugate(t, &t_inv, m)).collect();
    Ok(IsometryGroup { generators, order })
}

fn close_orbit(orbit: &mut HashSet<usize>, gens: &[IntMatrix], pool: &Pool) {
    let mut queue: VecDeque<usize> = orbit.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let image = g.left_apply(&pool.vecs[v]);
            let idx = pool.index[&image];
            if orbit.insert(idx) {
                queue.push_back(idx);
            }
        }
    }
}

pub fn is_isometric(l1: &ZLattice, l2: &ZLattice) -> Result<Option<IntMatrix>> {
    isometry_with_limit(l1, l2, DEFAULT_MAX_RANK)
}

/// An integral `U` with `U G2 U^T = G1`, or `None` when the lattices are not isometric.
pub fn isometry_with_limit(l1: &ZLattice, l2: &ZLattice, limit: usize) -> Result<Option<IntMatrix>> {
    let n = l1.rank();
    if l2.rank() != n {
        return Ok(None);
    }
    guard(n, limit)?;
    if l1.gram().det() != l2.gram().det() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(IntMatrix::identity(0)));
    }
    let r1 = lll_reduce(l1.gram())?;
    let r2 = lll_reduce(l2.gram())?;
    let scaled = scale_all(&[r1.gram.matrix(), r2.gram.matrix()]);
    let pool = Pool::new(&r2.gram, &scaled[1], &r1.gram.max_diagonal())?;
    let search = Search {
        target: &scaled[0],
        pool: &pool,
    };
    let Some(images) = search.first(&mut Vec::new()) else {
        return Ok(None);
    };
    let w = search.matrix(&images);
    let t1_inv = r1.transform.unimodular_inverse().expect("unimodular");
    Ok(Some(t1_inv.mul(&w).mul(&r2.transform)))
}

/// `U G U^T = G` and `U` unimodular.
pub fn is_isometry(g: &GramMatrix, u: &IntMatrix) -> bool {
    u.rows() == g.rank()
        && u.is_unimodular()
        && g.matrix().congruent(&u.to_rational()) == *g.matrix()
}

/// Order of the group generated by `gens` (acting on `n`-dimensional row vectors), or `None`
/// when it exceeds `limit`.
pub fn closure_order(n: usize, gens: &[IntMatrix], limit: usize) -> Option<BigInt> {
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([id.entries().to_vec()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = m.mul(g);
            if seen.insert(p.entries().to_vec()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(p);
            }
        }
    }
    Some(BigInt::from(seen.len()))
}

/// Blocks of the decomposition grouped into isometry classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryClass {
    /// The canonically smallest block of the class.
    pub representative: Block,
    /// Indices into the decomposition's block list.
    pub members: Vec<usize>,
}

impl IsometryClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

pub fn grouped_decomposition(lattice: &ZLattice) -> Result<(Vec<Block>, Vec<IsometryClass>)> {
    grouped_with_limit(lattice, DEFAULT_MAX_RANK)
}

pub fn grouped_with_limit(
    lattice: &ZLattice,
    limit: usize,
) -> Result<(Vec<Block>, Vec<IsometryClass>)> {
    let blocks = decompose(lattice)?.blocks;
    let mut classes: Vec<IsometryClass> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let l = ZLattice::from_matrix(b.gram.clone())?;
        let mut placed = false;
        for class in &mut classes {
            let rep = ZLattice::from_matrix(class.representative.gram.clone())?;
            if isometry_with_limit(&l, &rep, limit)?.is_some() {
                class.members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(IsometryClass {
                representative: b.clone(),
                members: vec![i],
            });
        }
    }
    Ok((blocks, classes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub group: IsometryGroup,
    pub blocks: Vec<Block>,
    pub classes: Vec<IsometryClass>,
    /// `prod_i |Aut(L_i1)|^{e_i} e_i!`.
    pub product_order: BigInt,
    pub order_matches: bool,
    pub generators_are_isometries: bool,
    pub blocks_permuted: bool,
    pub classes_preserved: bool,
}

impl FactorizationReport {
    pub fn ok(&self) -> bool {
        self.order_matches
            && self.generators_are_isometries
            && self.blocks_permuted
            && self.classes_preserved
    }
}

fn factorial(e: usize) -> BigInt {
    (1..=e).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// For each generator, the permutation it induces on the block spans (`None` when some block
/// is not mapped onto a block).
pub fn block_permutation(blocks: &[Block], u: &IntMatrix) -> Option<Vec<usize>> {
    blocks
        .iter()
        .map(|b| {
            let image = span_of(&b.basis.mul(u));
            blocks.iter().position(|c| c.basis == image)
        })
        .collect()
}

pub fn verify_aut_factorization(lattice: &ZLattice) -> Result<FactorizationReport> {
    verify_aut_factorization_with_limit(lattice, DEFAULT_MAX_RANK)
}

/// Checks the order identity, that generators are isometries permuting the block set, and that
/// the induced permutations respect isometry classes.
pub fn verify_aut_factorization_with_limit(
    lattice: &ZLattice,
    limit: usize,
) -> Result<FactorizationReport> {
    guard(lattice.rank(), limit)?;
    let group = aut_group_with_limit(lattice, limit)?;
    let (blocks, classes) = grouped_with_limit(lattice, limit)?;
    let mut product_order = BigInt::one();
    for class in &classes {
        let rep = ZLattice::from_matrix(class.representative.gram.clone())?;
        let a = aut_group_with_limit(&rep, limit)?.order;
        let e = class.multiplicity();
        product_order *= num::pow(a, e) * factorial(e);
    }
    let generators_are_isometries = group
        .generators
        .iter()
        .all(|u| is_isometry(lattice.gram(), u));
    let perms: Vec<Option<Vec<usize>>> = group
        .generators
        .iter()
        .map(|u| block_permutation(&blocks, u))
        .collect();
    let blocks_permuted = perms.iter().all(|p| {
        p.as_ref().is_some_and(|p| {
            let mut q = p.clone();
            q.sort_unstable();
            q == (0..blocks.len()).collect::<Vec<_>>()
        })
    });
    let mut class_of = vec![0; blocks.len()];
    for (c, class) in classes.iter().enumerate() {
        for &m in &class.members {
            class_of[m] = c;
        }
    }
    let classes_preserved = perms.iter().all(|p| {
        p.as_ref()
            .is_some_and(|p| p.iter().enumerate().all(|(i, &j)| class_of[i] == class_of[j]))
    });
    Ok(FactorizationReport {
        order_matches: group.order == product_order,
        group,
        blocks,
        classes,
        product_order,
        generators_are_isometries,
        blocks_permuted,
        classes_preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(rows: &[&[i64]]) -> ZLattice {
        ZLattice::from_i64(rows).unwrap()
    }

    fn check_group(l: &ZLattice, expected: u64) {
        let g = aut_group(l).unwrap();
        assert_eq!(g.order, BigInt::from(expected));
        assert!(g.generators.iter().all(|u| is_isometry(l.gram(), u)));
        assert_eq!(
            closure_order(l.rank(), &g.generators, 1_000_000),
            Some(BigInt::from(expected))
        );
    }

    #[test]
    fn small_orders() {
        check_group(&lattice(&[&[2]]), 2);
        check_group(&lattice(&[&[1, 0], &[0, 1]]), 8);
        check_group(&lattice(&[&[2, 1], &[1, 2]]), 12);
        check_group(&lattice(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 2]]), 24);
        // x -> (-x1 - x2, x2) reflects the ambiguous form 2x^2 + 2xy + 3y^2
        check_group(&lattice(&[&[2, 1], &[1, 3]]), 4);
    }

    #[test]
    fn isometry_tests() {
        let i2 = lattice(&[&[1, 0], &[0, 1]]);
        let u0 = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let conj = i2.rebased(&u0).unwrap();
        let w = is_isometric(&i2, &conj).unwrap().unwrap();
        assert_eq!(
            conj.gram().matrix().congruent(&w.to_rational()),
            *i2.gram().matrix()
        );
        assert!(is_isometric(&lattice(&[&[2]]), &lattice(&[&[4]])).unwrap().is_none());
        assert!(is_isometric(&lattice(&[&[2, 1], &[1, 2]]), &lattice(&[&[2, 0], &[0, 2]]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn grouping() {
        let l = lattice(&[
            &[2, 1, 0, 0],
            &[1, 2, 0, 0],
            &[0, 0, 2, 0],
            &[0, 0, 0, 2],
        ]);
        let (blocks, classes) = grouped_decomposition(&l).unwrap();
        assert_eq!(blocks.len(), 3);
        let mut mult: Vec<(usize, usize)> = classes
            .iter()
            .map(|c| (c.representative.rank(), c.multiplicity()))
            .collect();
        mult.sort_unstable();
        assert_eq!(mult, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn factorization_holds() {
        for l in [
            lattice(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            lattice(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 2]]),
            lattice(&[&[2, 1], &[1, 2]]),
        ] {
            let r = verify_aut_factorization(&l).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        let r = verify_aut_factorization(&lattice(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(r.group.order, BigInt::from(48));
    }

    #[test]
    fn rank_guard() {
        let l = ZLattice::new(GramMatrix::new(RatMatrix::identity(3)).unwrap());
        assert!(matches!(
            aut_group_with_limit(&l, 2),
            Err(Error::RankTooLarge { rank: 3, limit: 2 })
        ));
    }
}
