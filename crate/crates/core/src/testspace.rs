//! Compactly supported model sections.
//!
//! A test section over a box `Π [l_μ, r_μ]` is `w^p q` with the boundary
//! weight `w = Π_μ (x_μ - l_μ)(r_μ - x_μ)`. All partials of order `< p`
//! vanish on the boundary, which is what integration by parts needs.

use std::collections::HashMap;
use std::thread;

use crate::diffop::NormalOperator;
use crate::error::{Error, Result};
use crate::jet::{factorize_at, jet_prolong, JetHom};
use crate::ring::{MultiIndex, PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// Rational box `Π_μ [lower_μ, upper_μ]` with `lower_μ < upper_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestBox<C> {
    lower: Vec<C>,
    upper: Vec<C>,
}

impl<C: Scalar> TestBox<C> {
    pub fn new(lower: Vec<C>, upper: Vec<C>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidBox(format!(
                "{} lower and {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(axis) = lower.iter().zip(&upper).position(|(l, r)| l >= r) {
            return Err(Error::InvalidBox(format!("empty interval on axis {axis}")));
        }
        Ok(TestBox { lower, upper })
    }

    /// `[0, 1]^n`.
    pub fn unit(nvars: usize) -> Self {
        TestBox {
            lower: vec![C::zero(); nvars],
            upper: vec![C::one(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[C] {
        &self.lower
    }

    pub fn upper(&self) -> &[C] {
        &self.upper
    }

    /// Boundary weight `Π_μ (x_μ - l_μ)(r_μ - x_μ)`.
    pub fn weight(&self) -> Polynomial<C> {
        let n = self.nvars();
        (0..n).fold(Polynomial::one(n), |acc, mu| {
            let x = Polynomial::var(n, mu);
            let left = &x - &Polynomial::constant(n, self.lower[mu].clone());
            let right = &Polynomial::constant(n, self.upper[mu].clone()) - &x;
            &acc * &(&left * &right)
        })
    }

    pub fn contains_strictly(&self, point: &[C]) -> bool {
        point.len() == self.nvars()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (l, r))| l < x && x < r)
    }

    pub fn integrate(&self, p: &Polynomial<C>) -> C {
        p.integrate_box(&self.lower, &self.upper)
    }
}

/// `w^p q`: a model element of the compactly supported sections.
#[derive(Clone, Debug, PartialEq)]
pub struct TestSection<C> {
    bx: TestBox<C>,
    p: u32,
    q: Section<C>,
}

impl<C: Scalar> TestSection<C> {
    /// `p = 0` is representable but carries no boundary vanishing.
    pub fn new(bx: TestBox<C>, p: u32, q: Section<C>) -> Result<Self> {
        q.check_nvars(bx.nvars())?;
        Ok(TestSection { bx, p, q })
    }

    pub fn test_box(&self) -> &TestBox<C> {
        &self.bx
    }

    pub fn bump_exponent(&self) -> u32 {
        self.p
    }

    pub fn polynomial_part(&self) -> &Section<C> {
        &self.q
    }

    pub fn rank(&self) -> usize {
        self.q.rank()
    }

    pub fn nvars(&self) -> usize {
        self.q.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// The section `w^p q` as plain polynomials.
    pub fn realize(&self) -> Section<C> {
        let wp = self.bx.weight().pow(self.p);
        self.q.mul_poly(&wp)
    }

    /// `f · s`.
    pub fn mul_scalar(&self, f: &Polynomial<C>) -> Result<Self> {
        if f.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: f.nvars(),
            });
        }
        Ok(TestSection {
            bx: self.bx.clone(),
            p: self.p,
            q: self.q.mul_poly(f),
        })
    }

    /// `Δ s` as a test section with bump exponent `p - order(Δ)`.
    ///
    /// Requires `p > order(Δ)` so that the result still vanishes on the
    /// boundary.
    pub fn apply_operator(&self, op: &NormalOperator<C>) -> Result<Self> {
        if let Some(k) = op.order() {
            if self.p as usize <= k {
                return Err(Error::BudgetExhausted {
                    order: k,
                    budget: self.p,
                });
            }
        }
        self.apply_operator_exhausting(op)
    }

    /// Like [`apply_operator`](Self::apply_operator) but accepts
    /// `p = order(Δ)`, producing a bump exponent of zero.
    pub fn apply_operator_exhausting(&self, op: &NormalOperator<C>) -> Result<Self> {
        self.q.check_rank(op.input_rank())?;
        self.q.check_nvars(op.nvars())?;
        let Some(k) = op.order() else {
            return Ok(TestSection {
                bx: self.bx.clone(),
                p: self.p,
                q: Section::zero(self.nvars(), op.output_rank()),
            });
        };
        if (self.p as usize) < k {
            return Err(Error::BudgetExhausted {
                order: k,
                budget: self.p,
            });
        }
        let w = self.bx.weight();
        let mut cache: HashMap<MultiIndex, Section<C>> = HashMap::new();
        let mut acc = Section::zero(self.nvars(), op.output_rank());
        for (alpha, coeff) in op.terms() {
            // ∂^α (w^p q) = w^{p-|α|} r_α
            let r = bump_derivative(&w, self.p, &self.q, alpha, &mut cache);
            let lift = w.pow((k - alpha.degree()) as u32);
            acc = acc.add(&coeff.apply(&r).mul_poly(&lift));
        }
        Ok(TestSection {
            bx: self.bx.clone(),
            p: self.p - k as u32,
            q: acc,
        })
    }

    /// Exact `∫_box s^i`.
    pub fn integrate(&self, component: usize) -> Result<C> {
        if component >= self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: component + 1,
            });
        }
        let realized = &self.bx.weight().pow(self.p) * self.q.component(component);
        Ok(self.bx.integrate(&realized))
    }

    /// `s ↦ (s, σ) = Σ_i σ_i s^i`, a scalar test section.
    pub fn contract_dual(&self, sigma: &Section<C>) -> Result<Self> {
        let scalar = self.q.contract(sigma)?;
        Ok(TestSection {
            bx: self.bx.clone(),
            p: self.p,
            q: Section::scalar(scalar),
        })
    }

    /// Whether every partial of order `< p` of every component vanishes at
    /// `samples` points on each face of the box.
    pub fn vanishes_on_boundary(&self, samples: usize) -> bool {
        let realized = self.realize();
        let n = self.nvars();
        let orders = MultiIndex::up_to(n, (self.p as usize).saturating_sub(1));
        if self.p == 0 {
            return self.is_zero();
        }
        boundary_points(&self.bx, samples).iter().all(|pt| {
            orders.iter().all(|a| {
                realized
                    .components()
                    .iter()
                    .all(|c| c.derivative(a).eval_unchecked(pt).is_zero())
            })
        })
    }
}

fn bump_derivative<C: Scalar>(
    w: &Polynomial<C>,
    p: u32,
    q: &Section<C>,
    alpha: &MultiIndex,
    cache: &mut HashMap<MultiIndex, Section<C>>,
) -> Section<C> {
    if alpha.is_zero() {
        return q.clone();
    }
    if let Some(r) = cache.get(alpha) {
        return r.clone();
    }
    let axis = alpha
        .exponents()
        .iter()
        .position(|&e| e > 0)
        .expect("nonzero index");
    let mut lower = alpha.exponents().to_vec();
    lower[axis] -= 1;
    let lower = MultiIndex::from_exponents(lower);
    let prev = bump_derivative(w, p, q, &lower, cache);
    // ∂(w^e g) = w^{e-1} (e ∂w g + w ∂g) with e = p - |α| + 1
    let e = C::from_usize_exact(p as usize + 1 - alpha.degree());
    let dw = w.derivative(&MultiIndex::unit(w.nvars(), axis));
    let r = prev.map(|g| {
        &(&dw * g).scale(&e) + &(w * &g.derivative(&MultiIndex::unit(w.nvars(), axis)))
    });
    cache.insert(alpha.clone(), r.clone());
    r
}

/// Points on every face: each axis pinned to either bound, the others on a
/// uniform interior grid of `samples` values.
fn boundary_points<C: Scalar>(bx: &TestBox<C>, samples: usize) -> Vec<Vec<C>> {
    let n = bx.nvars();
    let interior = |mu: usize, t: usize| -> C {
        let frac = C::from_usize_exact(t + 1) / C::from_usize_exact(samples + 1);
        bx.lower[mu].clone() + (bx.upper[mu].clone() - bx.lower[mu].clone()) * frac
    };
    let mut pts = Vec::new();
    for face in 0..n {
        for bound in [&bx.lower[face], &bx.upper[face]] {
            let others = n - 1;
            let total = samples.pow(others as u32);
            for code in 0..total {
                let mut c = code;
                let pt = (0..n)
                    .map(|mu| {
                        if mu == face {
                            bound.clone()
                        } else {
                            let t = c % samples;
                            c /= samples;
                            interior(mu, t)
                        }
                    })
                    .collect();
                pts.push(pt);
            }
        }
    }
    pts
}

/// A function on jets, linear on fibres: `J^r s ↦ Σ c^{α,i}(x) ∂^α s^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberJetFunction<C> {
    hom: JetHom<C>,
}

impl<C: Scalar> FiberJetFunction<C> {
    pub fn new(hom: JetHom<C>) -> Result<Self> {
        if hom.codomain_rank() != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                found: hom.codomain_rank(),
            });
        }
        Ok(FiberJetFunction { hom })
    }

    /// The function `J^r s ↦ op(s)` of a scalar-valued operator, at jet
    /// order `r ≥ order(op)`.
    pub fn from_operator(op: &NormalOperator<C>, r: usize) -> Result<Self> {
        Self::new(factorize_at(op, r)?)
    }

    /// The coordinate function of jet slot `(α, i)`.
    pub fn slot(nvars: usize, rank: usize, alpha: MultiIndex, fiber: usize) -> Self {
        let mut m = PolyMatrix::zero(nvars, 1, rank);
        m.set(0, fiber, Polynomial::one(nvars));
        let op = NormalOperator::from_terms(nvars, rank, 1, [(alpha.clone(), m)]);
        Self::from_operator(&op, alpha.degree()).expect("order matches")
    }

    pub fn order(&self) -> usize {
        self.hom.domain().order()
    }

    pub fn hom(&self) -> &JetHom<C> {
        &self.hom
    }

    pub fn as_operator(&self) -> NormalOperator<C> {
        self.hom.to_operator()
    }

    /// `J^r s^* φ` as a polynomial.
    pub fn pull_back(&self, s: &Section<C>) -> Result<Polynomial<C>> {
        let j = jet_prolong(self.order(), s);
        Ok(self.hom.apply(&j)?.into_components().remove(0))
    }

    /// `φ_σ = φ ∘ J^∞σ`, so that `φ((s, σ)) = φ_σ(s)`.
    pub fn through_contraction(&self, sigma: &Section<C>) -> Result<Self> {
        let op = self
            .as_operator()
            .compose(&NormalOperator::multiplication(PolyMatrix::row(sigma)))?;
        Self::from_operator(&op, self.order())
    }

    /// `φ_Δ = φ ∘ J^∞𝔣^Δ`, so that `φ(Δ s) = φ_Δ(s)`.
    pub fn through_operator(&self, op: &NormalOperator<C>) -> Result<Self> {
        let composed = self.as_operator().compose(op)?;
        Self::from_operator(&composed, self.order() + op.order().unwrap_or(0))
    }
}

/// Grid estimate of a sup seminorm. The value is a lower bound for the true
/// supremum; `spacing` is the grid step per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SeminormEstimate {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub spacing: Vec<f64>,
}

/// `sup_x |J^r s^* φ|` over the box of `s`, estimated on a uniform grid with
/// `resolution` intervals per axis plus one local bisection pass around the
/// best grid point.
pub fn seminorm<C: Scalar>(
    phi: &FiberJetFunction<C>,
    s: &TestSection<C>,
    resolution: usize,
) -> Result<SeminormEstimate> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    seminorm_partitioned(phi, s, resolution, workers)
}

/// [`seminorm`] with the grid split across `workers` threads; the result
/// does not depend on `workers`.
pub fn seminorm_partitioned<C: Scalar>(
    phi: &FiberJetFunction<C>,
    s: &TestSection<C>,
    resolution: usize,
    workers: usize,
) -> Result<SeminormEstimate> {
    let bx = s.test_box();
    let n = bx.nvars();
    let lower: Vec<f64> = bx.lower().iter().map(to_f64).collect();
    let upper: Vec<f64> = bx.upper().iter().map(to_f64).collect();
    let res = resolution.max(1);
    let spacing: Vec<f64> = lower.iter().zip(&upper).map(|(l, r)| (r - l) / res as f64).collect();

    let g = phi.pull_back(&s.realize())?;
    if g.is_zero() {
        return Ok(SeminormEstimate {
            value: 0.0,
            argmax: lower.iter().zip(&upper).map(|(l, r)| 0.5 * (l + r)).collect(),
            spacing,
        });
    }
    let g = g.to_f64();
    let per_axis = res + 1;
    let total = per_axis.pow(n as u32);
    let point_of = |mut idx: usize| -> Vec<f64> {
        (0..n)
            .map(|mu| {
                let t = idx % per_axis;
                idx /= per_axis;
                if t == res {
                    upper[mu]
                } else {
                    lower[mu] + spacing[mu] * t as f64
                }
            })
            .collect()
    };

    let workers = workers.clamp(1, total);
    let chunk = total.div_ceil(workers);
    let best = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let g = &g;
                let point_of = &point_of;
                scope.spawn(move || {
                    let start = w * chunk;
                    let end = ((w + 1) * chunk).min(total);
                    let mut best: Option<(f64, usize)> = None;
                    for idx in start..end {
                        let v = g.eval_unchecked(&point_of(idx)).abs();
                        if best.is_none_or(|(b, _)| v > b) {
                            best = Some((v, idx));
                        }
                    }
                    best
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("seminorm worker panicked"))
            .fold(None, |acc: Option<(f64, usize)>, (v, i)| match acc {
                Some((b, j)) if b > v || (b == v && j < i) => Some((b, j)),
                _ => Some((v, i)),
            })
    })
    .expect("grid is nonempty");

    let mut x = point_of(best.1);
    let mut value = best.0;
    let mut h = spacing.clone();
    for _ in 0..60 {
        for mu in 0..n {
            for dir in [-0.5, 0.5] {
                let mut cand = x.clone();
                cand[mu] = (cand[mu] + dir * h[mu]).clamp(lower[mu], upper[mu]);
                let v = g.eval_unchecked(&cand).abs();
                if v > value {
                    value = v;
                    x = cand;
                }
            }
        }
        h.iter_mut().for_each(|v| *v *= 0.5);
    }
    Ok(SeminormEstimate {
        value,
        argmax: x,
        spacing,
    })
}

fn to_f64<C: Scalar>(c: &C) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_operator, parse_poly, parse_section, Operator, Rational};

    fn unit_1d(p: u32, q: &str) -> TestSection<Rational> {
        TestSection::new(TestBox::unit(1), p, parse_section(q, 1).unwrap()).unwrap()
    }

    fn op(s: &str, n: usize) -> Operator {
        parse_operator(s, n).unwrap().normalize().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn box_validation() {
        assert!(TestBox::new(vec![q(1, 1)], vec![q(0, 1)]).is_err());
        assert!(TestBox::<Rational>::new(vec![], vec![]).is_err());
        let b = TestBox::new(vec![q(0, 1), q(-1, 1)], vec![q(1, 1), q(1, 1)]).unwrap();
        assert!(b.contains_strictly(&[q(1, 2), q(0, 1)]));
        assert!(!b.contains_strictly(&[q(1, 1), q(0, 1)]));
    }

    #[test]
    fn module_action() {
        let s = unit_1d(2, "x + 1");
        assert_eq!(s.mul_scalar(&parse_poly("1", 1).unwrap()).unwrap(), s);
        let one = unit_1d(1, "1");
        let xs = one.mul_scalar(&parse_poly("x", 1).unwrap()).unwrap();
        assert_eq!(xs.polynomial_part(), &parse_section("x", 1).unwrap());
        let f = parse_poly("x^2 - 1", 1).unwrap();
        let g = parse_poly("3*x", 1).unwrap();
        assert_eq!(
            s.mul_scalar(&(&f * &g)).unwrap(),
            s.mul_scalar(&g).unwrap().mul_scalar(&f).unwrap()
        );
    }

    #[test]
    fn operator_action_lowers_the_bump() {
        let s = unit_1d(1, "1");
        // x(1-x) with p = 1 cannot absorb a first-order operator
        assert!(matches!(
            s.apply_operator(&op("dx", 1)),
            Err(Error::BudgetExhausted { order: 1, budget: 1 })
        ));
        let d = s.apply_operator_exhausting(&op("dx", 1)).unwrap();
        assert_eq!(d.bump_exponent(), 0);
        assert_eq!(d.realize().component(0), &parse_poly("1 - 2*x", 1).unwrap());
        assert_eq!(d.realize().component(0).eval(&[q(1, 2)]).unwrap(), q(0, 1));

        let f = parse_poly("x^2 + 3", 1).unwrap();
        let s3 = unit_1d(3, "x - 2");
        assert_eq!(
            s3.apply_operator(&Operator::scalar_multiplication(f.clone(), 1)).unwrap(),
            s3.mul_scalar(&f).unwrap()
        );
        assert!(s3.apply_operator(&Operator::zero(1, 1, 1)).unwrap().is_zero());
    }

    #[test]
    fn operator_action_matches_pointwise_values() {
        let bx = TestBox::new(vec![q(-1, 1), q(0, 1)], vec![q(1, 1), q(2, 1)]).unwrap();
        let s = TestSection::new(bx, 3, parse_section("x*y + 1, y^2", 2).unwrap()).unwrap();
        let d = op("[[x*dx^2, dy], [1, y*dx*dy - x]]", 2);
        let r = s.apply_operator(&d).unwrap();
        assert_eq!(r.bump_exponent(), 1);
        let direct = d.apply(&s.realize()).unwrap();
        for pt in [[q(1, 3), q(1, 2)], [q(-1, 2), q(7, 4)], [q(0, 1), q(1, 1)]] {
            assert_eq!(r.realize().eval(&pt).unwrap(), direct.eval(&pt).unwrap());
        }
        assert!(r.vanishes_on_boundary(3));
    }

    #[test]
    fn integration() {
        assert_eq!(unit_1d(1, "1").integrate(0).unwrap(), q(1, 6));
        assert_eq!(unit_1d(2, "0").integrate(0).unwrap(), q(0, 1));
        let t = unit_1d(2, "x^3 - x + 5");
        let dt = t.apply_operator(&op("dx", 1)).unwrap();
        assert_eq!(dt.integrate(0).unwrap(), q(0, 1));
        assert!(t.integrate(1).is_err());
    }

    #[test]
    fn contraction() {
        let bx = TestBox::unit(1);
        let s = TestSection::new(bx.clone(), 1, parse_section("1, x", 1).unwrap()).unwrap();
        let sigma = parse_section("x, 1", 1).unwrap();
        let c = s.contract_dual(&sigma).unwrap();
        assert_eq!(c.polynomial_part(), &parse_section("2*x", 1).unwrap());
        let one = unit_1d(2, "x^2 + 1");
        assert_eq!(one.contract_dual(&parse_section("1", 1).unwrap()).unwrap(), one);
        assert!(s.contract_dual(&parse_section("0, 0", 1).unwrap()).unwrap().is_zero());
        assert!(s.contract_dual(&parse_section("1", 1).unwrap()).is_err());
    }

    #[test]
    fn boundary_vanishing() {
        let bx = TestBox::new(vec![q(0, 1), q(-1, 2)], vec![q(2, 1), q(1, 2)]).unwrap();
        let s = TestSection::new(bx, 3, parse_section("x^2 - y + 1", 2).unwrap()).unwrap();
        assert!(s.vanishes_on_boundary(4));
        let flat = TestSection::new(TestBox::unit(1), 0, parse_section("1", 1).unwrap()).unwrap();
        assert!(!flat.vanishes_on_boundary(2));
    }

    #[test]
    fn seminorm_of_the_basic_bump() {
        let s = unit_1d(1, "1");
        let phi0 = FiberJetFunction::slot(1, 1, MultiIndex::zero(1), 0);
        let est = seminorm(&phi0, &s, 1 << 10).unwrap();
        assert!((est.value - 0.25).abs() < 1e-6, "{est:?}");
        let phi1 = FiberJetFunction::slot(1, 1, MultiIndex::unit(1, 0), 0);
        let est = seminorm(&phi1, &s, 1 << 10).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6, "{est:?}");
        let zero = unit_1d(1, "0");
        assert_eq!(seminorm(&phi0, &zero, 16).unwrap().value, 0.0);
    }

    #[test]
    fn refinement_finds_off_grid_maxima() {
        // max of x(1-x)(x - 1/3)^2... at an irrational point; coarse grid + refinement
        let s = unit_1d(1, "(x - 1/3)^2");
        let phi0 = FiberJetFunction::slot(1, 1, MultiIndex::zero(1), 0);
        let coarse = seminorm(&phi0, &s, 8).unwrap();
        let fine = seminorm(&phi0, &s, 1 << 14).unwrap();
        assert!((coarse.value - fine.value).abs() < 1e-9);
    }

    #[test]
    fn partitioning_does_not_change_the_estimate() {
        let bx = TestBox::new(vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(2, 1)]).unwrap();
        let s = TestSection::new(bx, 2, parse_section("x - y + 1/2", 2).unwrap()).unwrap();
        let phi = FiberJetFunction::from_operator(&op("x*dy + dx", 2), 1).unwrap();
        let a = seminorm_partitioned(&phi, &s, 64, 1).unwrap();
        for w in [2, 3, 7, 16] {
            assert_eq!(seminorm_partitioned(&phi, &s, 64, w).unwrap(), a);
        }
    }

    #[test]
    fn contraction_and_operator_compatibility() {
        let bx = TestBox::unit(1);
        let s = TestSection::new(bx, 3, parse_section("x + 1, x^2", 1).unwrap()).unwrap();
        let phi = FiberJetFunction::from_operator(&op("x*dx + 2", 1), 1).unwrap();
        let sigma = parse_section("x, 1 - x", 1).unwrap();
        let lhs = seminorm(&phi, &s.contract_dual(&sigma).unwrap(), 256).unwrap();
        let rhs = seminorm(&phi.through_contraction(&sigma).unwrap(), &s, 256).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-12);

        let d = op("[[dx, x], [0, dx]]", 1);
        let phi2 = FiberJetFunction::from_operator(&op("[[dx, 1]]", 1), 1).unwrap();
        let lhs = seminorm(&phi2, &s.apply_operator(&d).unwrap(), 256).unwrap();
        let rhs = seminorm(&phi2.through_operator(&d).unwrap(), &s, 256).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-12);
    }
}
