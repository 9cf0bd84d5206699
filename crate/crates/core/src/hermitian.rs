//! Lattices over an order `O` in an algebra `B` with positive involution, carrying a
//! `B`-valued Hermitian form, and their decomposition into indecomposable `O`-sublattices.

use num::{BigRational, Zero};

use crate::algebra::{families, require_positive_involution, InvolutiveOrder};
use crate::error::{Error, Result};
use crate::lattice::{decompose_spans, Block, OrthoDecomposition, PairingForm, ZLattice};
use crate::linalg::gram::GramMatrix;
use crate::linalg::hnf::{in_span, span_of};
use crate::linalg::matrix::{common_denominator, to_integer_vec, IntMatrix, RatMatrix};
use crate::linalg::solve::{solve_left, solve_rational};

/// `V = Q^N` with lattice `L = Z^N`, a left action of `B` by matrices on coordinate columns,
/// and the Hermitian form `F[a][b] = f(b_a, b_b)` as coordinate vectors in `B`.
#[derive(Clone, Debug)]
pub struct HermitianModule {
    order: InvolutiveOrder,
    action: Vec<RatMatrix>,
    form: Vec<Vec<Vec<BigRational>>>,
    trace_gram: GramMatrix,
}

impl HermitianModule {
    /// Validates the representation, faithfulness, `O`-stability of `Z^N`, Hermitian
    /// consistency of `F`, positivity of the involution and of the trace form.
    pub fn new(
        order: InvolutiveOrder,
        action: Vec<RatMatrix>,
        form: Vec<Vec<Vec<BigRational>>>,
    ) -> Result<Self> {
        let m = HermitianModule::build(order, action, form)?;
        m.check_faithful()?;
        Ok(m)
    }

    fn build(
        order: InvolutiveOrder,
        action: Vec<RatMatrix>,
        form: Vec<Vec<Vec<BigRational>>>,
    ) -> Result<Self> {
        let d = order.dim();
        let n = form.len();
        if action.len() != d {
            return Err(Error::InvalidModule(format!(
                "expected {d} action matrices, got {}",
                action.len()
            )));
        }
        if action.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::InvalidModule(format!("action matrices must be {n}x{n}")));
        }
        if form.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != d)) {
            return Err(Error::InvalidModule(format!(
                "form must be an {n}x{n} array of length-{d} vectors"
            )));
        }
        if action.iter().any(|a| a.to_integer().is_none()) {
            return Err(Error::InvalidModule(
                "lattice is not stable under the order (non-integral action)".into(),
            ));
        }
        let alg = order.algebra();
        require_positive_involution(alg, order.involution())?;

        let combine = |coeffs: &[BigRational]| {
            coeffs
                .iter()
                .zip(&action)
                .filter(|(c, _)| !c.is_zero())
                .fold(RatMatrix::zeros(n, n), |acc, (c, a)| acc.add(&a.scale(c)))
        };
        if combine(alg.one()) != RatMatrix::identity(n) {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let prod = alg.mul(&alg.basis_element(i), &alg.basis_element(j));
                if action[i].mul(&action[j]) != combine(&prod) {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative on e{i} e{j}"
                    )));
                }
            }
        }

        let star = order.involution();
        for a in 0..n {
            for b in 0..n {
                if form[b][a] != star.apply(&form[a][b]) {
                    return Err(Error::InvalidModule(format!(
                        "form is not Hermitian: F[{b}][{a}] != F[{a}][{b}]*"
                    )));
                }
            }
        }
        for (i, rho) in action.iter().enumerate() {
            let e = alg.basis_element(i);
            for a in 0..n {
                for b in 0..n {
                    let mut lhs = alg.zero_element();
                    for g in 0..n {
                        let c = &rho[(g, a)];
                        if !c.is_zero() {
                            for (l, v) in lhs.iter_mut().zip(&form[g][b]) {
                                *l += c * v;
                            }
                        }
                    }
                    if lhs != alg.mul(&e, &form[a][b]) {
                        return Err(Error::InvalidModule(format!(
                            "f(e{i} b{a}, b{b}) != e{i} f(b{a}, b{b})"
                        )));
                    }
                }
            }
        }

        let trace_gram =
            GramMatrix::new(RatMatrix::from_fn(n, n, |a, b| alg.left_trace(&form[a][b])))?;
        Ok(HermitianModule {
            order,
            action,
            form,
            trace_gram,
        })
    }

    fn check_faithful(&self) -> Result<()> {
        let n = self.rank();
        let d = self.order.dim();
        // columns: flattened action matrices; faithful iff they are independent
        let m = RatMatrix::from_fn(n * n, d, |r, i| self.action[i][(r / n, r % n)].clone());
        if m.rank() < d {
            return Err(Error::InvalidModule("action is not faithful".into()));
        }
        Ok(())
    }

    /// `V = R^0`, `L = R` with the left regular action and `f(x, y) = x y*`.
    pub fn regular(order: &InvolutiveOrder) -> Result<Self> {
        let alg = order.algebra();
        let d = alg.dim();
        let action = (0..d)
            .map(|i| alg.left_mult_matrix(&alg.basis_element(i)))
            .collect();
        let stars: Vec<_> = (0..d)
            .map(|j| order.involution().apply(&alg.basis_element(j)))
            .collect();
        let form = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| alg.mul(&alg.basis_element(a), &stars[b]))
                    .collect()
            })
            .collect();
        HermitianModule::new(order.clone(), action, form)
    }

    /// A plain lattice as a module over `O = Z`.
    pub fn from_lattice(lattice: &ZLattice) -> Result<Self> {
        let n = lattice.rank();
        let g = lattice.gram().matrix();
        let form = (0..n)
            .map(|a| (0..n).map(|b| vec![g[(a, b)].clone()]).collect())
            .collect();
        HermitianModule::new(families::rationals(), vec![RatMatrix::identity(n)], form)
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn order(&self) -> &InvolutiveOrder {
        &self.order
    }

    pub fn action(&self) -> &[RatMatrix] {
        &self.action
    }

    pub fn form(&self) -> &[Vec<Vec<BigRational>>] {
        &self.form
    }

    /// `f(x, y)` as a coordinate vector in `B`.
    pub fn form_value(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.rank();
        let mut out = self.order.algebra().zero_element();
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let c = &x[a] * &y[b];
                for (o, v) in out.iter_mut().zip(&self.form[a][b]) {
                    *o += &c * v;
                }
            }
        }
        out
    }

    /// `a x` for `a` in `B` (coordinates) and `x` in `V`.
    pub fn act(&self, a: &[BigRational], x: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.rank()];
        for (c, rho) in a.iter().zip(&self.action) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(rho.apply(x)) {
                *o += c * v;
            }
        }
        out
    }

    fn pairing(&self) -> PairingForm {
        let n = self.rank();
        let d = self.order.dim();
        let all: Vec<BigRational> = self.form.iter().flatten().flatten().cloned().collect();
        let scale = BigRational::from_integer(common_denominator(&all));
        let mats = (0..d)
            .map(|k| IntMatrix::from_fn(n, n, |a, b| (&self.form[a][b][k] * &scale).to_integer()))
            .collect();
        PairingForm::new(mats)
    }

    /// The module restricted to the `O`-stable sublattice spanned by the rows of `basis`,
    /// expressed in that basis. Faithfulness is not required of the restriction.
    pub fn restrict(&self, basis: &IntMatrix) -> Result<HermitianModule> {
        let k = basis.rows();
        let b = basis.to_rational();
        let mut action = Vec::with_capacity(self.action.len());
        for rho in &self.action {
            let mut cols = Vec::with_capacity(k);
            for j in 0..k {
                let w = rho.apply(b.row(j));
                let c = solve_left(&b, &w).map_err(|_| {
                    Error::OStabilityViolation("sublattice is not stable under the action".into())
                })?;
                if b.left_apply(&c) != w || to_integer_vec(&c).is_none() {
                    return Err(Error::OStabilityViolation(
                        "sublattice is not stable under the order".into(),
                    ));
                }
                cols.push(c);
            }
            action.push(RatMatrix::from_rows(cols, k).transpose());
        }
        let rows: Vec<Vec<BigRational>> = b.to_rows();
        let form = (0..k)
            .map(|i| (0..k).map(|j| self.form_value(&rows[i], &rows[j])).collect())
            .collect();
        HermitianModule::build(self.order.clone(), action, form)
    }
}

/// The Q-valued lattice `(L, Tr_B o f)`.
pub fn trace_form(m: &HermitianModule) -> ZLattice {
    ZLattice::new(m.trace_gram.clone())
}

/// `rho(e_i) * block` lies in `block` for every basis element `e_i` of the order.
pub fn check_o_stability(m: &HermitianModule, block: &IntMatrix) -> bool {
    let h = span_of(block);
    m.action.iter().all(|rho| {
        let rho = rho.to_integer().expect("validated integral");
        h.row_iter().all(|v| in_span(&h, &rho.apply(v)))
    })
}

/// The unique decomposition into indecomposable, pairwise `f`-orthogonal `O`-sublattices.
/// Block Gram matrices are restrictions of the trace form.
pub fn decompose_hermitian(m: &HermitianModule) -> Result<OrthoDecomposition> {
    let spans = decompose_spans(&m.trace_gram, &m.pairing())?;
    for s in &spans {
        if !check_o_stability(m, s) {
            return Err(Error::OStabilityViolation(format!(
                "block {:?} is not an O-lattice",
                s
            )));
        }
    }
    let blocks = spans
        .into_iter()
        .map(|basis| {
            let gram = m.trace_gram.restrict(&basis)?.into_matrix();
            Ok(Block { basis, gram })
        })
        .collect::<Result<_>>()?;
    Ok(OrthoDecomposition { blocks })
}

/// Pairwise `f`-orthogonality in `B`, completeness, `O`-stability and indecomposability.
pub fn verify_hermitian_decomposition(m: &HermitianModule, d: &OrthoDecomposition) -> bool {
    let n = m.rank();
    let form = m.pairing();
    let spans = d.spans();
    if !crate::lattice::is_complete(n, &spans) {
        return false;
    }
    for (i, a) in spans.iter().enumerate() {
        if span_of(a) != *a || !check_o_stability(m, a) {
            return false;
        }
        if spans[i + 1..].iter().any(|b| !form.spans_orthogonal(a, b)) {
            return false;
        }
    }
    spans.iter().all(|s| {
        m.restrict(s)
            .and_then(|r| decompose_hermitian(&r))
            .is_ok_and(|r| r.len() == 1)
    })
}

/// Solves `x = sum_k c_k b_k` over the rows of an integral basis; `None` when `x` is outside
/// the rational span.
pub(crate) fn coordinates_in(basis: &IntMatrix, x: &[BigRational]) -> Option<Vec<BigRational>> {
    let b = basis.to_rational();
    let c = solve_rational(&b.transpose(), x).ok()?;
    (b.left_apply(&c) == x).then_some(c)
}
