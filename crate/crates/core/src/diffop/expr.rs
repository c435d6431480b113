use super::NormalOperator;
use crate::error::{Error, Result};
use crate::ring::{PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// Unnormalized operator syntax, as produced by the literal parser.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr<C> {
    /// Multiplication by a polynomial matrix (`rows × cols`).
    Multiply(PolyMatrix<C>),
    /// `∂_axis` acting componentwise on rank-`rank` sections.
    Partial { nvars: usize, axis: usize, rank: usize },
    Sum(Box<OperatorExpr<C>>, Box<OperatorExpr<C>>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<OperatorExpr<C>>, Box<OperatorExpr<C>>),
    Scale(C, Box<OperatorExpr<C>>),
    /// Matrix of scalar operators, row-major.
    Block(Vec<Vec<OperatorExpr<C>>>),
}

impl<C: Scalar> OperatorExpr<C> {
    pub fn multiply(f: Polynomial<C>) -> Self {
        OperatorExpr::Multiply(PolyMatrix::scalar(f, 1))
    }

    pub fn partial(nvars: usize, axis: usize) -> Self {
        OperatorExpr::Partial {
            nvars,
            axis,
            rank: 1,
        }
    }

    pub fn sum(a: Self, b: Self) -> Result<Self> {
        check_eq(a.nvars(), b.nvars(), true)?;
        check_eq(a.input_rank(), b.input_rank(), false)?;
        check_eq(a.output_rank(), b.output_rank(), false)?;
        Ok(OperatorExpr::Sum(Box::new(a), Box::new(b)))
    }

    pub fn compose(outer: Self, inner: Self) -> Result<Self> {
        check_eq(outer.nvars(), inner.nvars(), true)?;
        check_eq(outer.input_rank(), inner.output_rank(), false)?;
        Ok(OperatorExpr::Compose(Box::new(outer), Box::new(inner)))
    }

    /// Block of scalar entries; every entry must be `1 × 1`.
    pub fn block(rows: Vec<Vec<Self>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(Error::Invalid("empty operator matrix".into()));
        }
        let nvars = rows[0][0].nvars();
        for row in &rows {
            check_eq(width, row.len(), false)?;
            for e in row {
                check_eq(nvars, e.nvars(), true)?;
                check_eq(1, e.input_rank(), false)?;
                check_eq(1, e.output_rank(), false)?;
            }
        }
        Ok(OperatorExpr::Block(rows))
    }

    pub fn nvars(&self) -> usize {
        match self {
            OperatorExpr::Multiply(m) => m.nvars(),
            OperatorExpr::Partial { nvars, .. } => *nvars,
            OperatorExpr::Sum(a, _) | OperatorExpr::Compose(a, _) | OperatorExpr::Scale(_, a) => {
                a.nvars()
            }
            OperatorExpr::Block(rows) => rows[0][0].nvars(),
        }
    }

    pub fn input_rank(&self) -> usize {
        match self {
            OperatorExpr::Multiply(m) => m.cols(),
            OperatorExpr::Partial { rank, .. } => *rank,
            OperatorExpr::Sum(a, _) | OperatorExpr::Scale(_, a) => a.input_rank(),
            OperatorExpr::Compose(_, inner) => inner.input_rank(),
            OperatorExpr::Block(rows) => rows[0].len(),
        }
    }

    pub fn output_rank(&self) -> usize {
        match self {
            OperatorExpr::Multiply(m) => m.rows(),
            OperatorExpr::Partial { rank, .. } => *rank,
            OperatorExpr::Sum(a, _) | OperatorExpr::Scale(_, a) => a.output_rank(),
            OperatorExpr::Compose(outer, _) => outer.output_rank(),
            OperatorExpr::Block(rows) => rows.len(),
        }
    }

    /// Canonical normal form.
    pub fn normalize(&self) -> Result<NormalOperator<C>> {
        match self {
            OperatorExpr::Multiply(m) => Ok(NormalOperator::multiplication(m.clone())),
            OperatorExpr::Partial { nvars, axis, rank } => {
                NormalOperator::partial(*nvars, *rank, *axis)
            }
            OperatorExpr::Sum(a, b) => a.normalize()?.add(&b.normalize()?),
            OperatorExpr::Compose(outer, inner) => outer.normalize()?.compose(&inner.normalize()?),
            OperatorExpr::Scale(c, a) => Ok(a.normalize()?.scale(c)),
            OperatorExpr::Block(rows) => {
                let nvars = self.nvars();
                let (m_out, m_in) = (rows.len(), rows[0].len());
                let mut out = NormalOperator::zero(nvars, m_in, m_out);
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        let scalar = e.normalize()?;
                        let placed = NormalOperator::from_terms(
                            nvars,
                            m_in,
                            m_out,
                            scalar.terms().map(|(a, m)| {
                                let mut big = PolyMatrix::zero(nvars, m_out, m_in);
                                big.set(i, j, m.get(0, 0).clone());
                                (a.clone(), big)
                            }),
                        );
                        out = out.add(&placed)?;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Direct evaluation on a section, following the syntax tree without
    /// normalizing.
    pub fn apply(&self, s: &Section<C>) -> Result<Section<C>> {
        s.check_rank(self.input_rank())?;
        s.check_nvars(self.nvars())?;
        match self {
            OperatorExpr::Multiply(m) => Ok(m.apply(s)),
            OperatorExpr::Partial { axis, .. } => s.partial(*axis),
            OperatorExpr::Sum(a, b) => Ok(a.apply(s)?.add(&b.apply(s)?)),
            OperatorExpr::Compose(outer, inner) => outer.apply(&inner.apply(s)?),
            OperatorExpr::Scale(c, a) => Ok(a.apply(s)?.scale(c)),
            OperatorExpr::Block(rows) => {
                let comps = rows
                    .iter()
                    .map(|row| {
                        row.iter().enumerate().try_fold(
                            Polynomial::zero(s.nvars()),
                            |acc, (j, e)| {
                                let part = e.apply(&Section::scalar(s.component(j).clone()))?;
                                Ok::<_, Error>(&acc + part.component(0))
                            },
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                Section::new(s.nvars(), comps)
            }
        }
    }
}

fn check_eq(expected: usize, found: usize, dimension: bool) -> Result<()> {
    if expected == found {
        Ok(())
    } else if dimension {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Err(Error::RankMismatch { expected, found })
    }
}
