//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use latdec::algebra::families::*;
use latdec::algebra::InvolutiveOrder;
use latdec::lattice::ZLattice;
use latdec::linalg::hnf::span_of;
use latdec::linalg::{IntMatrix, RatMatrix};
use num::{BigInt, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unimodular matrix with all entries in `[-bound, bound]`, built from random elementary
/// row operations, swaps and sign changes that keep the entries in range.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, bound: i64) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..(4 * n * n + 4) {
        match rng.gen_range(0..4) {
            0 | 1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let q: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                let row: Vec<i64> = (0..n).map(|k| m[i][k] + q * m[j][k]).collect();
                if row.iter().all(|x| x.abs() <= bound) {
                    m[i] = row;
                }
            }
            2 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                m.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for x in &mut m[i] {
                    *x = -*x;
                }
            }
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&rows)
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    IntMatrix::from_fn(n, n, |i, j| BigInt::from(i64::from(p[i] == j)))
}

/// The indecomposable building blocks of the planted instances.
pub fn block_types() -> Vec<RatMatrix> {
    vec![
        RatMatrix::from_i64(&[&[1]]),
        RatMatrix::from_i64(&[&[2]]),
        RatMatrix::from_i64(&[&[3]]),
        RatMatrix::from_i64(&[&[2, 1], &[1, 2]]),
        RatMatrix::from_i64(&[&[2, 1], &[1, 3]]),
    ]
}

/// A block-diagonal Gram matrix of total rank at most `max_rank`, with the type index and the
/// coordinate range of each block.
pub struct Planted {
    pub gram: RatMatrix,
    pub types: Vec<usize>,
    pub ranges: Vec<std::ops::Range<usize>>,
}

pub fn random_planted(rng: &mut impl Rng, max_rank: usize) -> Planted {
    let types = block_types();
    let target = rng.gen_range(1..=max_rank);
    let mut chosen = Vec::new();
    let mut ranges = Vec::new();
    let mut rank = 0;
    while rank < target {
        let fitting: Vec<usize> = (0..types.len())
            .filter(|&t| rank + types[t].rows() <= target)
            .collect();
        let t = *fitting.choose(rng).unwrap();
        ranges.push(rank..rank + types[t].rows());
        rank += types[t].rows();
        chosen.push(t);
    }
    let blocks: Vec<RatMatrix> = chosen.iter().map(|&t| types[t].clone()).collect();
    Planted {
        gram: RatMatrix::block_diagonal(&blocks),
        types: chosen,
        ranges,
    }
}

/// Gram matrix `U G U^T` together with the planted blocks as HNF spans in the new coordinates
/// (rows of `U^{-1}` belonging to each block), sorted canonically.
pub fn conjugated(p: &Planted, u: &IntMatrix) -> (ZLattice, Vec<IntMatrix>) {
    let l = ZLattice::from_matrix(p.gram.congruent(&u.to_rational())).unwrap();
    let ui = u.unimodular_inverse().unwrap();
    let mut spans: Vec<IntMatrix> = p
        .ranges
        .iter()
        .map(|r| span_of(&ui.select_rows(&r.clone().collect::<Vec<_>>())))
        .collect();
    sort_spans(&mut spans);
    (l, spans)
}

pub fn sort_spans(spans: &mut [IntMatrix]) {
    spans.sort_by(|a, b| {
        a.rows()
            .cmp(&b.rows())
            .then_with(|| a.entries().cmp(b.entries()))
    });
}

/// Spans of the rows of each matrix after `x -> x P`, re-normalized and sorted.
pub fn transport(spans: &[IntMatrix], p: &IntMatrix) -> Vec<IntMatrix> {
    let mut out: Vec<IntMatrix> = spans.iter().map(|s| span_of(&s.mul(p))).collect();
    sort_spans(&mut out);
    out
}

/// Automorphism count by brute force over integer matrices with entries in `[-r, r]`.
pub fn brute_force_aut_order(g: &RatMatrix, r: i64) -> usize {
    let n = g.rows();
    let vals: Vec<i64> = (-r..=r).collect();
    let mut count = 0;
    let total = vals.len().pow((n * n) as u32);
    for code in 0..total {
        let mut c = code;
        let entries: Vec<i64> = (0..n * n)
            .map(|_| {
                let v = vals[c % vals.len()];
                c /= vals.len();
                v
            })
            .collect();
        let u = IntMatrix::from_fn(n, n, |i, j| BigInt::from(entries[i * n + j]));
        if g.congruent(&u.to_rational()) == *g {
            count += 1;
        }
    }
    count
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * BigInt::from(k))
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Orders with positive involution used for fuzzing, with their dimensions kept small.
pub fn positive_orders() -> Vec<(&'static str, InvolutiveOrder)> {
    vec![
        ("Z", rationals()),
        ("Z^2", product(&[rationals(), rationals()])),
        ("Z^3", product(&[rationals(), rationals(), rationals()])),
        ("Z[i]", gaussian_integers()),
        ("Z[i] x Z", product(&[gaussian_integers(), rationals()])),
        ("Z[sqrt-2]", quadratic_order(-2, 0)),
        ("Z[w] w^2=w-1", quadratic_order(-1, 1)),
        ("M2(Z)", matrix_order(2)),
        ("M2(Z) x Z", product(&[matrix_order(2), rationals()])),
        ("Z[C2]", group_ring(&cyclic_group_table(2))),
        ("Z[C3]", group_ring(&cyclic_group_table(3))),
        ("Z[C4]", group_ring(&cyclic_group_table(4))),
        ("Z[C2xC2]", group_ring(&klein_four_table())),
        ("Z[S3]", group_ring(&s3_table())),
        ("Z[i] x Z[i]", product(&[gaussian_integers(), gaussian_integers()])),
    ]
}

/// Element coordinates transported from the basis `rows of P` back to the original basis.
pub fn to_original_coords(x: &[BigInt], p: &IntMatrix) -> Vec<BigInt> {
    p.left_apply(x)
}

/// The standard `E8` Cartan matrix (Bourbaki numbering).
pub fn e8_cartan() -> RatMatrix {
    let edges = [(0, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    RatMatrix::from_fn(8, 8, |i, j| {
        let v = if i == j {
            2
        } else if edges.contains(&(i.min(j), i.max(j))) {
            -1
        } else {
            0
        };
        latdec::linalg::matrix::rat_int(v)
    })
}

/// Bourbaki simple roots of `E8` in `R^8`, doubled to integers.
pub fn e8_simple_roots_doubled() -> Vec<[i64; 8]> {
    let mut roots = vec![[1, -1, -1, -1, -1, -1, -1, 1], [2, 2, 0, 0, 0, 0, 0, 0]];
    for k in 0..6 {
        let mut r = [0i64; 8];
        r[k] = -2;
        r[k + 1] = 2;
        roots.push(r);
    }
    roots
}

/// All 240 roots of `E8` in the even coordinate system, doubled: `±e_i ± e_j` and
/// `(±1/2, ..., ±1/2)` with an even number of minus signs. Independent exhaustive search over
/// `{-2, -1, 0, 1, 2}^8` for doubled vectors of squared length 8 in the lattice.
pub fn e8_roots_doubled() -> Vec<[i64; 8]> {
    let mut out = Vec::new();
    for code in 0..5usize.pow(8) {
        let mut c = code;
        let mut v = [0i64; 8];
        for x in &mut v {
            *x = (c % 5) as i64 - 2;
            c /= 5;
        }
        let all_even = v.iter().all(|x| x % 2 == 0);
        let all_odd = v.iter().all(|x| x % 2 != 0);
        let sum: i64 = v.iter().sum();
        let norm: i64 = v.iter().map(|x| x * x).sum();
        // doubled coordinates: sum of halves even <=> doubled sum divisible by 4
        if (all_even || all_odd) && sum % 4 == 0 && norm == 8 {
            out.push(v);
        }
    }
    out
}
