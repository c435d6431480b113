use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::multi_index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{falling_factorial, Scalar};

/// Name of variable `axis` in an `nvars`-dimensional ring.
pub fn variable_name(nvars: usize, axis: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if nvars <= NAMES.len() {
        NAMES[axis].to_string()
    } else {
        format!("x{axis}")
    }
}

/// Sparse multivariate polynomial over `C` in `nvars` variables.
///
/// Terms are kept in a graded-lex ordered map with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C>,
}

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOp<C> {
    Add,
    Sub,
    Mul,
    /// Scale the first operand; the second is ignored.
    Scale(C),
}

/// Checked binary arithmetic on polynomials.
pub fn poly_arith<C: Scalar>(
    a: &Polynomial<C>,
    b: &Polynomial<C>,
    op: PolyOp<C>,
) -> Result<Polynomial<C>> {
    match op {
        PolyOp::Scale(c) => Ok(a.scale(&c)),
        _ => {
            a.check_same(b)?;
            Ok(match op {
                PolyOp::Add => a + b,
                PolyOp::Sub => a - b,
                PolyOp::Mul => a * b,
                PolyOp::Scale(_) => unreachable!(),
            })
        }
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    /// The coordinate function `x_axis`.
    pub fn var(nvars: usize, axis: usize) -> Self {
        assert!(axis < nvars, "axis {axis} out of range for {nvars} variables");
        Self::monomial(MultiIndex::unit(nvars, axis), C::one())
    }

    pub fn monomial(exponent: MultiIndex, c: C) -> Self {
        let nvars = exponent.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.nvars(), nvars, "monomial has wrong number of variables");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: MultiIndex, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &MultiIndex) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&MultiIndex::zero(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative along `axis`.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.nvars {
            return Err(Error::AxisOutOfRange {
                axis,
                nvars: self.nvars,
            });
        }
        Ok(self.derivative(&MultiIndex::unit(self.nvars, axis)))
    }

    /// `∂^α self`, computed monomial by monomial with falling factorials.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        assert_eq!(alpha.nvars(), self.nvars, "derivative index has wrong length");
        if alpha.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(alpha) {
                let factor = e
                    .exponents()
                    .iter()
                    .zip(alpha.exponents())
                    .fold(C::one(), |acc, (&n, &k)| acc * falling_factorial::<C>(n, k));
                out.add_term(rest, c.clone() * factor);
            }
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::PointLength {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[C]) -> C {
        // Powers are cached per axis; monomials are short so this beats Horner
        // for sparse inputs.
        let max_deg = self.terms.keys().map(|e| e.exponents().iter().copied().max().unwrap_or(0)).max().unwrap_or(0);
        let powers: Vec<Vec<C>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(max_deg as usize + 1);
                v.push(C::one());
                for i in 0..max_deg as usize {
                    v.push(v[i].clone() * x.clone());
                }
                v
            })
            .collect();
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let m = e
                .exponents()
                .iter()
                .enumerate()
                .fold(c.clone(), |m, (axis, &k)| m * powers[axis][k as usize].clone());
            acc + m
        })
    }

    /// Replace every coefficient through `f`, dropping resulting zeros.
    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Lossy conversion for numeric evaluation.
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coefficients(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact integral of `x^e` over the box `Π [lower_i, upper_i]`.
    pub fn integrate_box(&self, lower: &[C], upper: &[C]) -> C {
        assert_eq!(lower.len(), self.nvars);
        assert_eq!(upper.len(), self.nvars);
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let m = e.exponents().iter().enumerate().fold(c.clone(), |m, (axis, &k)| {
                let k1 = k + 1;
                let hi = pow_scalar(&upper[axis], k1);
                let lo = pow_scalar(&lower[axis], k1);
                m * (hi - lo) / C::from_u32(k1).expect("small integer")
            });
            acc + m
        })
    }
}

pub(crate) fn pow_scalar<C: Scalar>(x: &C, k: u32) -> C {
    (0..k).fold(C::one(), |acc, _| acc * x.clone())
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    /// Panics on a dimension mismatch; use [`poly_arith`] for a checked sum.
    fn add(self, rhs: Self) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Scalar> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Self) -> Polynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

/// Writes a monomial `x^2*y`; the empty monomial writes nothing.
pub(crate) fn write_monomial(f: &mut impl fmt::Write, e: &MultiIndex) -> fmt::Result {
    let mut first = true;
    for (axis, &k) in e.exponents().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(&variable_name(e.nvars(), axis))?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl<C: Scalar + fmt::Display + Signed> fmt::Display for Polynomial<C> {
    /// Canonical literal, highest term first: `3/2*x^2*y - x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if e.is_zero() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().rev())
            .finish()
    }
}
