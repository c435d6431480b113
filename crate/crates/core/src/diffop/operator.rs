use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ring::{variable_name, write_monomial, MultiIndex, PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// Linear differential operator `Σ_α C_α(x) ∂^α` from `A^{m_in}` to
/// `A^{m_out}`, with `m_out × m_in` polynomial matrix coefficients.
///
/// Only nonzero coefficients are stored, keyed by the derivative index in
/// graded-lex order, so two operators are equal iff they act identically.
#[derive(Clone, PartialEq, Debug)]
pub struct NormalOperator<C> {
    nvars: usize,
    m_in: usize,
    m_out: usize,
    coeffs: BTreeMap<MultiIndex, PolyMatrix<C>>,
}

impl<C: Scalar> NormalOperator<C> {
    pub fn zero(nvars: usize, m_in: usize, m_out: usize) -> Self {
        NormalOperator {
            nvars,
            m_in,
            m_out,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(nvars: usize, m: usize) -> Self {
        Self::multiplication(PolyMatrix::identity(nvars, m))
    }

    /// Zero-order operator `s ↦ M s`.
    pub fn multiplication(m: PolyMatrix<C>) -> Self {
        let mut op = Self::zero(m.nvars(), m.cols(), m.rows());
        op.add_term(MultiIndex::zero(m.nvars()), m);
        op
    }

    /// `f · I_m`.
    pub fn scalar_multiplication(f: Polynomial<C>, m: usize) -> Self {
        Self::multiplication(PolyMatrix::scalar(f, m))
    }

    /// `∂^α` acting componentwise on rank-`m` sections.
    pub fn derivative(alpha: MultiIndex, m: usize) -> Self {
        let nvars = alpha.nvars();
        let mut op = Self::zero(nvars, m, m);
        op.add_term(alpha, PolyMatrix::identity(nvars, m));
        op
    }

    pub fn partial(nvars: usize, m: usize, axis: usize) -> Result<Self> {
        if axis >= nvars {
            return Err(Error::AxisOutOfRange { axis, nvars });
        }
        Ok(Self::derivative(MultiIndex::unit(nvars, axis), m))
    }

    pub fn from_terms(
        nvars: usize,
        m_in: usize,
        m_out: usize,
        terms: impl IntoIterator<Item = (MultiIndex, PolyMatrix<C>)>,
    ) -> Self {
        let mut op = Self::zero(nvars, m_in, m_out);
        for (a, m) in terms {
            assert_eq!((m.rows(), m.cols()), (m_out, m_in), "coefficient shape");
            op.add_term(a, m);
        }
        op
    }

    fn add_term(&mut self, alpha: MultiIndex, m: PolyMatrix<C>) {
        if m.is_zero() {
            return;
        }
        match self.coeffs.remove(&alpha) {
            None => {
                self.coeffs.insert(alpha, m);
            }
            Some(prev) => {
                let sum = prev.add(&m);
                if !sum.is_zero() {
                    self.coeffs.insert(alpha, sum);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn input_rank(&self) -> usize {
        self.m_in
    }

    pub fn output_rank(&self) -> usize {
        self.m_out
    }

    pub fn is_scalar(&self) -> bool {
        self.m_in == 1 && self.m_out == 1
    }

    /// Coefficients in ascending graded-lex order of the derivative index.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &PolyMatrix<C>)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&PolyMatrix<C>> {
        self.coeffs.get(alpha)
    }

    /// `C_α`, or the zero matrix.
    pub fn coefficient_or_zero(&self, alpha: &MultiIndex) -> PolyMatrix<C> {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zero(self.nvars, self.m_out, self.m_in))
    }

    pub fn zero_order_part(&self) -> PolyMatrix<C> {
        self.coefficient_or_zero(&MultiIndex::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest `|α|` with a nonzero coefficient; `None` for the zero
    /// operator, which satisfies the order condition for every `k`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::degree).max()
    }

    /// Highest total degree among coefficient entries.
    pub fn coefficient_degree(&self) -> Option<usize> {
        self.coeffs
            .values()
            .flat_map(|m| (0..m.rows()).flat_map(move |i| m.row_entries(i).iter()))
            .filter_map(Polynomial::degree)
            .max()
    }

    /// Scalar operator in entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> NormalOperator<C> {
        NormalOperator::from_terms(
            self.nvars,
            1,
            1,
            self.coeffs.iter().map(|(a, m)| {
                (
                    a.clone(),
                    PolyMatrix::from_rows(self.nvars, vec![vec![m.get(i, j).clone()]]),
                )
            }),
        )
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.m_in != other.m_in {
            return Err(Error::RankMismatch {
                expected: self.m_in,
                found: other.m_in,
            });
        }
        if self.m_out != other.m_out {
            return Err(Error::RankMismatch {
                expected: self.m_out,
                found: other.m_out,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, m) in &other.coeffs {
            out.add_term(a.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|p| -p)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coefficients(|p| p.scale(c))
    }

    /// `f · Δ`, post-multiplying the output by a scalar function.
    pub fn mul_poly(&self, f: &Polynomial<C>) -> Self {
        self.map_coefficients(|p| f * p)
    }

    fn map_coefficients(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        NormalOperator::from_terms(
            self.nvars,
            self.m_in,
            self.m_out,
            self.coeffs.iter().map(|(a, m)| (a.clone(), m.map(&f))),
        )
    }

    /// Normal form of `self ∘ inner`, commuting derivatives past
    /// coefficients with the Leibniz rule
    /// `∂^α ∘ B = Σ_{γ≤α} (α choose γ) (∂^γ B) ∂^{α-γ}`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.nvars != inner.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: inner.nvars,
            });
        }
        if self.m_in != inner.m_out {
            return Err(Error::RankMismatch {
                expected: self.m_in,
                found: inner.m_out,
            });
        }
        let mut out = Self::zero(self.nvars, inner.m_in, self.m_out);
        for (alpha, a) in &self.coeffs {
            for gamma in alpha.sub_indices() {
                let rest = alpha.checked_sub(&gamma).expect("gamma ≤ alpha");
                let binom: C = alpha.binomial(&gamma);
                for (beta, b) in &inner.coeffs {
                    let db = b.map(|p| p.derivative(&gamma).scale(&binom));
                    if db.is_zero() {
                        continue;
                    }
                    out.add_term(rest.add(beta), a.mul(&db));
                }
            }
        }
        Ok(out)
    }

    /// `Σ_α C_α ∂^α s`.
    pub fn apply(&self, s: &Section<C>) -> Result<Section<C>> {
        s.check_rank(self.m_in)?;
        s.check_nvars(self.nvars)?;
        let mut acc = Section::zero(self.nvars, self.m_out);
        for (alpha, m) in &self.coeffs {
            let ds = s.map(|p| p.derivative(alpha));
            acc = acc.add(&m.apply(&ds));
        }
        Ok(acc)
    }

    /// Formal adjoint `Σ_α (-1)^{|α|} ∂^α ∘ C_αᵀ`, the operator with
    /// `∫ ⟨Δs, t⟩ = ∫ ⟨s, Δ†t⟩` whenever boundary terms vanish.
    pub fn formal_adjoint(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.m_out, self.m_in);
        for (alpha, m) in &self.coeffs {
            let sign = if alpha.degree() % 2 == 0 { C::one() } else { -C::one() };
            let d = NormalOperator::derivative(alpha.clone(), self.m_in).scale(&sign);
            let t = NormalOperator::multiplication(m.transpose());
            let term = d.compose(&t).expect("shapes agree");
            out = out.add(&term).expect("shapes agree");
        }
        out
    }

    pub fn map_scalar<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> NormalOperator<D> {
        NormalOperator::from_terms(
            self.nvars,
            self.m_in,
            self.m_out,
            self.coeffs
                .iter()
                .map(|(a, m)| (a.clone(), map_matrix(m, f))),
        )
    }
}

fn map_matrix<C: Scalar, D: Scalar>(m: &PolyMatrix<C>, f: impl Fn(&C) -> D + Copy) -> PolyMatrix<D> {
    PolyMatrix::from_rows(
        m.nvars(),
        (0..m.rows())
            .map(|i| m.row_entries(i).iter().map(|p| p.map_coefficients(f)).collect())
            .collect(),
    )
}

fn write_derivative(f: &mut impl fmt::Write, alpha: &MultiIndex) -> fmt::Result {
    let mut first = true;
    for (axis, &k) in alpha.exponents().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        write!(f, "d{}", variable_name(alpha.nvars(), axis))?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

/// Expanded scalar normal form `c x^β ∂^α + ...`, highest `α` first.
fn write_scalar<C: Scalar + fmt::Display + Signed>(
    f: &mut impl fmt::Write,
    terms: &[(MultiIndex, Polynomial<C>)],
) -> fmt::Result {
    let mut first = true;
    for (alpha, p) in terms.iter().rev() {
        for (beta, c) in p.terms().rev() {
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let a = c.abs();
            let bare = beta.is_zero() && alpha.is_zero();
            let mut need_star = false;
            if !a.is_one() || bare {
                write!(f, "{a}")?;
                need_star = true;
            }
            if !beta.is_zero() {
                if need_star {
                    f.write_char('*')?;
                }
                write_monomial(f, beta)?;
                need_star = true;
            }
            if !alpha.is_zero() {
                if need_star {
                    f.write_char('*')?;
                }
                write_derivative(f, alpha)?;
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<C: Scalar + fmt::Display + Signed> fmt::Display for NormalOperator<C> {
    /// Operator literal that parses back to the same normal form. Scalar
    /// operators print as `x*dx + 1`; others as a bracketed matrix of
    /// scalar entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entry_terms = |i: usize, j: usize| -> Vec<(MultiIndex, Polynomial<C>)> {
            self.coeffs
                .iter()
                .map(|(a, m)| (a.clone(), m.get(i, j).clone()))
                .filter(|(_, p)| !p.is_zero())
                .collect()
        };
        if self.is_scalar() {
            return write_scalar(f, &entry_terms(0, 0));
        }
        f.write_char('[')?;
        for i in 0..self.m_out {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_char('[')?;
            for j in 0..self.m_in {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write_scalar(f, &entry_terms(i, j))?;
            }
            f.write_char(']')?;
        }
        f.write_char(']')
    }
}
