use super::space::{JetSpace, JetVector};
use crate::diffop::NormalOperator;
use crate::error::{Error, Result};
use crate::ring::{PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// A-linear map `J^k(P) → Q`, as an `e × dim` polynomial matrix over the
/// jet coordinates of its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct JetHom<C> {
    domain: JetSpace,
    matrix: PolyMatrix<C>,
}

impl<C: Scalar> JetHom<C> {
    pub fn new(domain: JetSpace, matrix: PolyMatrix<C>) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::RankMismatch {
                expected: domain.dim(),
                found: matrix.cols(),
            });
        }
        if matrix.nvars() != domain.nvars() {
            return Err(Error::DimensionMismatch {
                expected: domain.nvars(),
                found: matrix.nvars(),
            });
        }
        Ok(JetHom { domain, matrix })
    }

    pub fn domain(&self) -> &JetSpace {
        &self.domain
    }

    pub fn codomain_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &PolyMatrix<C> {
        &self.matrix
    }

    pub fn apply(&self, j: &JetVector<C>) -> Result<Section<C>> {
        if j.space() != &self.domain {
            return Err(Error::Invalid(
                "jet vector does not live in the domain of the jet homomorphism".into(),
            ));
        }
        let column = Section::new(self.domain.nvars(), j.coords().to_vec())?;
        Ok(self.matrix.apply(&column))
    }

    /// The operator `s ↦ self(J^k s)`: reads each slot `(α, i)` as the
    /// coefficient of `∂^α` on component `i`.
    pub fn to_operator(&self) -> NormalOperator<C> {
        let n = self.domain.nvars();
        let m = self.domain.fiber_rank();
        let e = self.codomain_rank();
        let mut out = NormalOperator::zero(n, m, e);
        for (slot, (alpha, i)) in self.domain.basis().iter().enumerate() {
            let mut coeff = PolyMatrix::zero(n, e, m);
            for row in 0..e {
                coeff.set(row, *i, self.matrix.get(row, slot).clone());
            }
            let term = NormalOperator::from_terms(n, m, e, [(alpha.clone(), coeff)]);
            out = out.add(&term).expect("shapes agree");
        }
        out
    }
}

/// The jet homomorphism `𝔣^Δ` of a nonzero operator at its own order.
pub fn factorize<C: Scalar>(op: &NormalOperator<C>) -> Result<JetHom<C>> {
    let k = op.order().ok_or(Error::ZeroOperator)?;
    factorize_at(op, k)
}

/// `𝔣^Δ` on `J^k` for any `k ≥ order(Δ)`; the zero operator factors
/// through every `J^k`.
pub fn factorize_at<C: Scalar>(op: &NormalOperator<C>, k: usize) -> Result<JetHom<C>> {
    if let Some(order) = op.order() {
        if order > k {
            return Err(Error::JetOrder {
                requested: order,
                available: k,
            });
        }
    }
    let n = op.nvars();
    let domain = JetSpace::new(n, op.input_rank(), k);
    let e = op.output_rank();
    let mut matrix = PolyMatrix::zero(n, e, domain.dim());
    for (slot, (alpha, i)) in domain.basis().iter().enumerate() {
        if let Some(c) = op.coefficient(alpha) {
            for row in 0..e {
                matrix.set(row, slot, c.get(row, *i).clone());
            }
        }
    }
    JetHom::new(domain, matrix)
}

/// Inverse of [`factorize`].
pub fn operator_from_jet_hom<C: Scalar>(h: &JetHom<C>) -> NormalOperator<C> {
    h.to_operator()
}

/// Zero jet homomorphism on `J^k` of a rank-`m` bundle.
pub fn zero_hom<C: Scalar>(nvars: usize, rank: usize, order: usize, codomain: usize) -> JetHom<C> {
    let domain = JetSpace::new(nvars, rank, order);
    let dim = domain.dim();
    JetHom {
        domain,
        matrix: PolyMatrix::zero(nvars, codomain, dim),
    }
}

/// Scalar jet homomorphism from one row of slot coefficients.
pub fn row_hom<C: Scalar>(domain: JetSpace, row: Vec<Polynomial<C>>) -> Result<JetHom<C>> {
    let n = domain.nvars();
    JetHom::new(domain, PolyMatrix::from_rows(n, vec![row]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::jet_prolong;
    use crate::ring::MultiIndex;
    use crate::{parse_operator, parse_poly, Operator, Poly, Rational};

    fn op(s: &str, n: usize) -> Operator {
        parse_operator(s, n).unwrap().normalize().unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, 1).unwrap()
    }

    fn monomial(j: u32) -> Section<Rational> {
        Section::scalar(Poly::monomial(
            MultiIndex::from_exponents(vec![j]),
            Rational::from_integer(1.into()),
        ))
    }

    #[test]
    fn factorize_second_order() {
        let d = op("dx^2 + x", 1);
        let h = factorize(&d).unwrap();
        assert_eq!(h.matrix().row_entries(0), &[p("x"), p("0"), p("1")]);
        // monomial oracle: (x^j)'' + x·x^j
        for j in 0..=6u32 {
            let s = monomial(j);
            let lhs = h.apply(&jet_prolong(2, &s)).unwrap();
            let jj = Rational::from_integer(i64::from(j * j.saturating_sub(1)).into());
            let expected = &p("x") * s.component(0)
                + if j >= 2 {
                    monomial(j - 2).component(0).scale(&jj)
                } else {
                    Poly::zero(1)
                };
            assert_eq!(lhs.component(0), &expected);
        }
    }

    #[test]
    fn factorize_zero_and_first_order() {
        let f = op("x^2 - 1", 1);
        let h = factorize(&f).unwrap();
        assert_eq!(h.domain().order(), 0);
        assert_eq!(h.matrix().row_entries(0), &[p("x^2 - 1")]);
        let h = factorize(&op("x*dx", 1)).unwrap();
        assert_eq!(h.matrix().row_entries(0), &[p("0"), p("x")]);
        for j in 0..=6u32 {
            let s = monomial(j);
            let got = h.apply(&jet_prolong(1, &s)).unwrap();
            let expected = s.component(0).scale(&Rational::from_integer(i64::from(j).into()));
            assert_eq!(got.component(0), &expected);
        }
        assert!(matches!(
            factorize(&Operator::zero(1, 1, 1)),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn operator_from_hom_examples() {
        let sel = row_hom(JetSpace::new(1, 1, 1), vec![p("0"), p("1")]).unwrap();
        assert_eq!(operator_from_jet_hom(&sel), op("dx", 1));
        let zero = zero_hom::<Rational>(1, 1, 2, 1);
        assert!(operator_from_jet_hom(&zero).is_zero());
        let h = row_hom(JetSpace::new(1, 1, 2), vec![p("x"), p("0"), p("1")]).unwrap();
        assert_eq!(operator_from_jet_hom(&h), op("dx^2 + x", 1));
    }

    #[test]
    fn matrix_operator_round_trip() {
        let d = op("[[x*dx*dy, 1], [dy^2, x - y], [0, dx]]", 2);
        let h = factorize(&d).unwrap();
        assert_eq!(h.codomain_rank(), 3);
        assert_eq!(h.domain().dim(), 12);
        assert_eq!(operator_from_jet_hom(&h), d);
        assert_eq!(factorize(&operator_from_jet_hom(&h)).unwrap(), h);
    }

    #[test]
    fn factorize_at_higher_order() {
        let d = op("dx", 1);
        let h = factorize_at(&d, 3).unwrap();
        assert_eq!(h.domain().dim(), 4);
        assert_eq!(h.to_operator(), d);
        assert!(factorize_at(&op("dx^2", 1), 1).is_err());
    }
}
