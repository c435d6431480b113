use std::fmt;

use num_traits::Signed;

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of the free module `A^m`: a section of a rank-`m` trivial bundle.
#[derive(Clone, PartialEq, Debug)]
pub struct Section<C> {
    nvars: usize,
    components: Vec<Polynomial<C>>,
}

impl<C: Scalar> Section<C> {
    pub fn new(nvars: usize, components: Vec<Polynomial<C>>) -> Result<Self> {
        for c in &components {
            if c.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: c.nvars(),
                });
            }
        }
        Ok(Section { nvars, components })
    }

    /// Rank-one section.
    pub fn scalar(p: Polynomial<C>) -> Self {
        Section {
            nvars: p.nvars(),
            components: vec![p],
        }
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        Section {
            nvars,
            components: vec![Polynomial::zero(nvars); rank],
        }
    }

    /// Standard basis section `e_i`.
    pub fn basis(nvars: usize, rank: usize, i: usize) -> Self {
        let mut s = Self::zero(nvars, rank);
        s.components[i] = Polynomial::one(nvars);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial<C> {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial<C>> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: self.rank(),
            });
        }
        Ok(())
    }

    pub fn check_nvars(&self, nvars: usize) -> Result<()> {
        if self.nvars != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: self.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "section rank mismatch");
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "section rank mismatch");
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Polynomial<C>, &Polynomial<C>) -> Polynomial<C>) -> Self {
        Section {
            nvars: self.nvars,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Module action `f · s`.
    pub fn mul_poly(&self, f: &Polynomial<C>) -> Self {
        self.map(|c| f * c)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn partial(&self, axis: usize) -> Result<Self> {
        Ok(Section {
            nvars: self.nvars,
            components: self
                .components
                .iter()
                .map(|c| c.partial(axis))
                .collect::<Result<_>>()?,
        })
    }

    pub fn map(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        Section {
            nvars: self.nvars,
            components: self.components.iter().map(f).collect(),
        }
    }

    /// Pointwise pairing `Σ_i σ_i s^i` with a covector field.
    pub fn contract(&self, covector: &Section<C>) -> Result<Polynomial<C>> {
        covector.check_rank(self.rank())?;
        Ok(self
            .components
            .iter()
            .zip(&covector.components)
            .fold(Polynomial::zero(self.nvars), |acc, (a, b)| &acc + &(a * b)))
    }

    pub fn eval(&self, point: &[C]) -> Result<Vec<C>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

impl<C: Scalar + fmt::Display + Signed> fmt::Display for Section<C> {
    /// Comma-separated component literals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
