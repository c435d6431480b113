//! Seeded random generators over the rationals, shared by the property
//! suites and the `verify-all` driver.

use num_bigint::BigInt;
use rand::Rng;

use crate::dist::{Distribution, PointFunctional, RegularDensity};
use crate::ring::{MultiIndex, PolyMatrix, Polynomial, Section};
use crate::testspace::{TestBox, TestSection};
use crate::{Operator, Poly, Rational};

/// Nonzero rational with small numerator and denominator.
pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-5..=5);
        if n != 0 {
            let d: i64 = rng.gen_range(1..=4);
            return Rational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

/// Random polynomial of total degree `≤ degree`; each monomial is present
/// with probability one half.
pub fn poly<R: Rng>(rng: &mut R, nvars: usize, degree: usize) -> Poly {
    Polynomial::from_terms(
        nvars,
        MultiIndex::up_to(nvars, degree)
            .into_iter()
            .filter_map(|e| rng.gen_bool(0.5).then(|| (e, nonzero_rational(rng))))
            .collect::<Vec<_>>(),
    )
}

/// Like [`poly`] but never zero.
pub fn nonzero_poly<R: Rng>(rng: &mut R, nvars: usize, degree: usize) -> Poly {
    loop {
        let p = poly(rng, nvars, degree);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random polynomial with a nonconstant part, so that `δ_a` is never
/// trivially zero.
pub fn nonconstant_poly<R: Rng>(rng: &mut R, nvars: usize, degree: usize) -> Poly {
    loop {
        let p = poly(rng, nvars, degree.max(1));
        if !p.is_constant() {
            return p;
        }
    }
}

pub fn section<R: Rng>(rng: &mut R, nvars: usize, rank: usize, degree: usize) -> Section<Rational> {
    Section::new(nvars, (0..rank).map(|_| poly(rng, nvars, degree)).collect())
        .expect("components share dimension")
}

pub fn matrix<R: Rng>(
    rng: &mut R,
    nvars: usize,
    rows: usize,
    cols: usize,
    degree: usize,
) -> PolyMatrix<Rational> {
    PolyMatrix::from_rows(
        nvars,
        (0..rows)
            .map(|_| (0..cols).map(|_| poly(rng, nvars, degree)).collect())
            .collect(),
    )
}

/// Random operator of order exactly `order` with coefficient entries of
/// degree `≤ degree`.
pub fn operator<R: Rng>(
    rng: &mut R,
    nvars: usize,
    m_in: usize,
    m_out: usize,
    order: usize,
    degree: usize,
) -> Operator {
    loop {
        let terms: Vec<_> = MultiIndex::up_to(nvars, order)
            .into_iter()
            .filter_map(|a| {
                (a.degree() == order || rng.gen_bool(0.6))
                    .then(|| (a, matrix(rng, nvars, m_out, m_in, degree)))
            })
            .collect();
        let op = Operator::from_terms(nvars, m_in, m_out, terms);
        if op.order() == Some(order) {
            return op;
        }
    }
}

/// Rational strictly inside `(lower, upper)` with a small denominator.
pub fn interior<R: Rng>(rng: &mut R, lower: &Rational, upper: &Rational) -> Rational {
    let d: i64 = rng.gen_range(2..=9);
    let k: i64 = rng.gen_range(1..d);
    lower + (upper - lower) * Rational::new(BigInt::from(k), BigInt::from(d))
}

/// Interior point of a box.
pub fn interior_point<R: Rng>(rng: &mut R, bx: &TestBox<Rational>) -> Vec<Rational> {
    bx.lower()
        .iter()
        .zip(bx.upper())
        .map(|(l, r)| interior(rng, l, r))
        .collect()
}

/// `w^p q` with a random `q` of degree `≤ degree`.
pub fn test_section<R: Rng>(
    rng: &mut R,
    bx: &TestBox<Rational>,
    p: u32,
    rank: usize,
    degree: usize,
) -> TestSection<Rational> {
    let q = section(rng, bx.nvars(), rank, degree);
    TestSection::new(bx.clone(), p, q).expect("dimensions agree")
}

/// Random point functionals of order `≤ max_alpha` at interior points, plus
/// a density of degree `≤ degree` when `density` is set.
pub fn distribution<R: Rng>(
    rng: &mut R,
    bx: &TestBox<Rational>,
    rank: usize,
    npoints: usize,
    max_alpha: usize,
    degree: usize,
    density: bool,
) -> Distribution<Rational> {
    let n = bx.nvars();
    let alphas = MultiIndex::up_to(n, max_alpha);
    let points = (0..npoints)
        .map(|_| PointFunctional {
            point: interior_point(rng, bx),
            alpha: alphas[rng.gen_range(0..alphas.len())].clone(),
            fiber: rng.gen_range(0..rank),
            coeff: nonzero_rational(rng),
        })
        .collect();
    let density = density.then(|| RegularDensity::plain(section(rng, n, rank, degree)));
    Distribution::new(n, rank, points, density).expect("dimensions agree")
}
