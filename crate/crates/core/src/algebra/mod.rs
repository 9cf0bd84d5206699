//! Finite-dimensional Q-algebras given by structure constants, anti-involutions, orders, and
//! the trace-form predicates relating semi-simplicity, non-degeneracy and positivity.

pub mod families;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::linalg::gram::{first_nonpositive_minor, nonpositive_witness};
use crate::linalg::matrix::{to_integer_vec, IntMatrix, RatMatrix};

/// `e_i e_j = sum_k c[i][j][k] e_k` on a distinguished basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    dim: usize,
    constants: Vec<BigRational>,
    one: Vec<BigRational>,
    left_traces: Vec<BigRational>,
    right_traces: Vec<BigRational>,
}

impl FiniteDimAlgebra {
    /// Validates shape, associativity on basis triples and the unit laws.
    pub fn new(
        dim: usize,
        constants: Vec<Vec<Vec<BigRational>>>,
        one: Vec<BigRational>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if constants.len() != dim
            || constants
                .iter()
                .any(|a| a.len() != dim || a.iter().any(|b| b.len() != dim))
        {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must have shape {dim}x{dim}x{dim}"
            )));
        }
        if one.len() != dim {
            return Err(Error::InvalidAlgebra(format!("unit must have length {dim}")));
        }
        let flat = constants.into_iter().flatten().flatten().collect();
        let alg = FiniteDimAlgebra::from_flat(dim, flat, one);
        if let Some((i, j, k)) = alg.associativity_failure() {
            return Err(Error::InvalidAlgebra(format!(
                "not associative: (e{i} e{j}) e{k} != e{i} (e{j} e{k})"
            )));
        }
        for i in 0..dim {
            let e = alg.basis_element(i);
            if alg.mul(&alg.one, &e) != e || alg.mul(&e, &alg.one) != e {
                return Err(Error::InvalidAlgebra(format!(
                    "unit law fails for basis element e{i}"
                )));
            }
        }
        Ok(alg)
    }

    fn from_flat(dim: usize, constants: Vec<BigRational>, one: Vec<BigRational>) -> Self {
        let c = |i: usize, j: usize, k: usize| &constants[(i * dim + j) * dim + k];
        let left_traces = (0..dim)
            .map(|i| (0..dim).map(|j| c(i, j, j).clone()).sum())
            .collect();
        let right_traces = (0..dim)
            .map(|i| (0..dim).map(|j| c(j, i, j).clone()).sum())
            .collect();
        FiniteDimAlgebra {
            dim,
            constants,
            one,
            left_traces,
            right_traces,
        }
    }

    /// Algebra from a product closure `mul(i, j) -> coordinates of e_i e_j`.
    pub fn from_products(
        dim: usize,
        one: Vec<BigRational>,
        mut mul: impl FnMut(usize, usize) -> Vec<BigRational>,
    ) -> Result<Self> {
        let constants = (0..dim)
            .map(|i| (0..dim).map(|j| mul(i, j)).collect())
            .collect();
        FiniteDimAlgebra::new(dim, constants, one)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> Vec<Vec<Vec<BigRational>>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn one(&self) -> &[BigRational] {
        &self.one
    }

    pub fn zero_element(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.dim]
    }

    pub fn basis_element(&self, i: usize) -> Vec<BigRational> {
        let mut e = self.zero_element();
        e[i] = BigRational::one();
        e
    }

    pub fn mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let d = self.dim;
        let mut out = self.zero_element();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y` on coordinate columns.
    pub fn left_mult_matrix(&self, x: &[BigRational]) -> RatMatrix {
        let cols: Vec<Vec<BigRational>> = (0..self.dim)
            .map(|j| self.mul(x, &self.basis_element(j)))
            .collect();
        RatMatrix::from_rows(cols, self.dim).transpose()
    }

    /// Matrix of `y -> y x` on coordinate columns.
    pub fn right_mult_matrix(&self, x: &[BigRational]) -> RatMatrix {
        let cols: Vec<Vec<BigRational>> = (0..self.dim)
            .map(|j| self.mul(&self.basis_element(j), x))
            .collect();
        RatMatrix::from_rows(cols, self.dim).transpose()
    }

    /// Trace of left multiplication by `x`.
    pub fn left_trace(&self, x: &[BigRational]) -> BigRational {
        x.iter().zip(&self.left_traces).map(|(a, t)| a * t).sum()
    }

    /// Trace of right multiplication by `x` (the left trace of the opposite algebra).
    pub fn right_trace(&self, x: &[BigRational]) -> BigRational {
        x.iter().zip(&self.right_traces).map(|(a, t)| a * t).sum()
    }

    /// `[Tr(e_i e_j)]`.
    pub fn trace_gram(&self) -> RatMatrix {
        let basis: Vec<_> = (0..self.dim).map(|i| self.basis_element(i)).collect();
        RatMatrix::from_fn(self.dim, self.dim, |i, j| {
            self.left_trace(&self.mul(&basis[i], &basis[j]))
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| (0..self.dim).all(|k| self.constant(i, j, k) == self.constant(j, i, k)))
        })
    }

    pub fn is_integral(&self) -> bool {
        self.constants.iter().all(|c| c.is_integer()) && self.one.iter().all(|c| c.is_integer())
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim;
        let basis: Vec<_> = (0..d).map(|i| self.basis_element(i)).collect();
        let products: Vec<Vec<Vec<BigRational>>> = (0..d)
            .map(|i| (0..d).map(|j| self.mul(&basis[i], &basis[j])).collect())
            .collect();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs = self.mul(&products[i][j], &basis[k]);
                    let rhs = self.mul(&basis[i], &products[j][k]);
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// Anti-involution `x -> x*`, stored as the matrix `S` with `x* = S x` on coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    matrix: RatMatrix,
}

impl Involution {
    /// Checks `S^2 = 1`, `(e_i e_j)* = e_j* e_i*` and `1* = 1`.
    pub fn new(alg: &FiniteDimAlgebra, matrix: RatMatrix) -> Result<Self> {
        let d = alg.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::InvalidInvolution(format!("matrix must be {d}x{d}")));
        }
        if matrix.mul(&matrix) != RatMatrix::identity(d) {
            return Err(Error::InvalidInvolution("S^2 is not the identity".into()));
        }
        let inv = Involution { matrix };
        let stars: Vec<_> = (0..d).map(|i| inv.apply(&alg.basis_element(i))).collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = inv.apply(&alg.mul(&alg.basis_element(i), &alg.basis_element(j)));
                if lhs != alg.mul(&stars[j], &stars[i]) {
                    return Err(Error::InvalidInvolution(format!(
                        "(e{i} e{j})* != e{j}* e{i}*"
                    )));
                }
            }
        }
        if inv.apply(alg.one()) != alg.one() {
            return Err(Error::InvalidInvolution("1* != 1".into()));
        }
        Ok(inv)
    }

    pub fn identity(alg: &FiniteDimAlgebra) -> Result<Self> {
        Involution::new(alg, RatMatrix::identity(alg.dim()))
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.matrix.apply(x)
    }
}

/// An order: the algebra's distinguished basis is a Z-basis closed under multiplication,
/// containing 1 and stable under the involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveOrder {
    algebra: FiniteDimAlgebra,
    involution: Involution,
}

impl InvolutiveOrder {
    pub fn new(algebra: FiniteDimAlgebra, involution: Involution) -> Result<Self> {
        if !algebra.is_integral() {
            return Err(Error::InvalidOrder(
                "structure constants and unit must be integral".into(),
            ));
        }
        if involution.matrix().to_integer().is_none() {
            return Err(Error::InvalidOrder(
                "involution matrix must be integral (order not *-stable)".into(),
            ));
        }
        Ok(InvolutiveOrder {
            algebra,
            involution,
        })
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.algebra
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn one_int(&self) -> Vec<BigInt> {
        to_integer_vec(self.algebra.one()).expect("order unit is integral")
    }

    pub fn involution_int(&self) -> IntMatrix {
        self.involution.matrix().to_integer().expect("order involution is integral")
    }
}

pub fn left_trace(a: &FiniteDimAlgebra, x: &[BigRational]) -> BigRational {
    a.left_trace(x)
}

pub fn right_trace(a: &FiniteDimAlgebra, x: &[BigRational]) -> BigRational {
    a.right_trace(x)
}

/// (nd): the pairing `Tr(xy)` is non-degenerate.
pub fn check_nd(a: &FiniteDimAlgebra) -> bool {
    !a.trace_gram().det().is_zero()
}

/// Semi-simplicity, decided through its equivalence with (nd) in characteristic zero.
pub fn check_ss(a: &FiniteDimAlgebra) -> bool {
    check_nd(a)
}

/// (l=r): left and right traces agree on every basis element.
pub fn check_l_eq_r(a: &FiniteDimAlgebra) -> bool {
    (0..a.dim()).all(|i| {
        let e = a.basis_element(i);
        a.left_trace(&e) == a.right_trace(&e)
    })
}

/// (l=l*): `Tr(x*) = Tr(x)` on every basis element.
pub fn check_l_eq_lstar(a: &FiniteDimAlgebra, s: &Involution) -> bool {
    (0..a.dim()).all(|i| {
        let e = a.basis_element(i);
        a.left_trace(&s.apply(&e)) == a.left_trace(&e)
    })
}

/// `[Tr(e_i e_j*)]`.
pub fn involution_trace_form(a: &FiniteDimAlgebra, s: &Involution) -> RatMatrix {
    let basis: Vec<_> = (0..a.dim()).map(|i| a.basis_element(i)).collect();
    let stars: Vec<_> = basis.iter().map(|e| s.apply(e)).collect();
    RatMatrix::from_fn(a.dim(), a.dim(), |i, j| {
        a.left_trace(&a.mul(&basis[i], &stars[j]))
    })
}

/// (nd*): the pairing `Tr(x y*)` is non-degenerate.
pub fn check_nd_star(a: &FiniteDimAlgebra, s: &Involution) -> bool {
    !involution_trace_form(a, s).det().is_zero()
}

/// (pd*): `Tr(x x*) > 0` for all nonzero `x`, i.e. the form `Tr(x y*)` is symmetric and
/// positive definite.
pub fn check_positive_involution(a: &FiniteDimAlgebra, s: &Involution) -> bool {
    let t = involution_trace_form(a, s);
    t.is_symmetric() && first_nonpositive_minor(&t).is_none()
}

/// A nonzero integer coordinate vector `x` with `Tr(x x*) <= 0`, or `None` when the involution
/// is positive. `Tr(x x*)` only sees the symmetric part of the trace form.
pub fn positivity_witness(a: &FiniteDimAlgebra, s: &Involution) -> Option<Vec<BigInt>> {
    if check_positive_involution(a, s) {
        return None;
    }
    let t = involution_trace_form(a, s);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sym = RatMatrix::from_fn(t.rows(), t.cols(), |i, j| (&t[(i, j)] + &t[(j, i)]) * &half);
    nonpositive_witness(&sym)
}

/// Checks positivity and returns `NotPositiveInvolution` with a witness otherwise.
pub fn require_positive_involution(a: &FiniteDimAlgebra, s: &Involution) -> Result<()> {
    match positivity_witness(a, s) {
        None => Ok(()),
        Some(witness) => Err(Error::NotPositiveInvolution { witness }),
    }
}
