//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Every criterion is checked against an oracle that does not route
//! through the code path it certifies: black-box commutator chains for
//! order, hand-rolled partials for jets and vector fields, a from-scratch
//! pairing for transposes. Run with `cargo test -p jetform --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jetform::diffop::{decompose_first_order, delta, NormalOperator};
use jetform::dist::{
    lie_derivative_dist, mul_dist, pair, recover_coefficients, restricts_to_test, transpose, RecoveryBounds,
};
use jetform::jet::{check_splitting, d1, factorize, jet_prolong, jet_rank, operator_from_jet_hom, Connection, JetSpace};
use jetform::random;
use jetform::ring::{MultiIndex, PolyMatrix, Polynomial};
use jetform::testspace::{seminorm, FiberJetFunction, TestBox, TestSection};
use jetform::{Dist, Operator, Poly, RBox, Rational, Sect, TestFn};

const SEED: u64 = 0x5eed;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(ok: usize, total: usize, what: &str) -> Verdict {
    Verdict {
        passed: ok == total,
        detail: format!("{ok}/{total} {what}"),
    }
}

fn rng_for(criterion: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(criterion);
    rng
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn zero() -> Rational {
    q(0, 1)
}

/// `∂^α p` by repeated single partials.
fn partials(p: &Poly, alpha: &MultiIndex) -> Poly {
    alpha
        .exponents()
        .iter()
        .enumerate()
        .fold(p.clone(), |acc, (axis, &e)| {
            (0..e).fold(acc, |a, _| a.partial(axis).unwrap())
        })
}

/// `u(f) = Σ_μ u^μ ∂_μ f`.
fn along(u: &[Poly], f: &Poly) -> Poly {
    u.iter()
        .enumerate()
        .fold(Polynomial::zero(f.nvars()), |acc, (mu, c)| &acc + &(c * &f.partial(mu).unwrap()))
}

/// The 100 operators shared by criteria 1 and 2.
fn operator_batch() -> Vec<Operator> {
    let mut rng = rng_for(0);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let k = rng.gen_range(0..=3);
            let deg = rng.gen_range(0..=3);
            random::operator(&mut rng, n, 1, 1, k, deg)
        })
        .collect()
}

/// A point, the coefficient values of `Δ` there, and a section's jet there.
type JetProbe = (Vec<Rational>, Vec<(MultiIndex, Rational)>, Poly);

/// Search bound for the iterated-δ order; exceeds every generated order.
const MAX_LEVEL: usize = 5;

/// `p(y + x0)` truncated to total degree `≤ jet`: the Taylor jet of `p` at `x0`.
fn jet_at(p: &Poly, x0: &[Rational], jet: usize) -> Poly {
    let n = p.nvars();
    let shifted: Vec<Poly> = (0..n)
        .map(|mu| &Polynomial::var(n, mu) + &Polynomial::constant(n, x0[mu].clone()))
        .collect();
    let full = p.terms().fold(Polynomial::zero(n), |acc, (e, c)| {
        let mono = (0..n).fold(Polynomial::constant(n, c.clone()), |m, mu| &m * &shifted[mu].pow(e.get(mu)));
        &acc + &mono
    });
    truncate(&full, jet)
}

fn truncate(p: &Poly, jet: usize) -> Poly {
    Polynomial::from_terms(
        p.nvars(),
        p.terms().filter(|(e, _)| e.degree() <= jet).map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// `(δ_{a_j} ⋯ δ_{a_0} Δ)(s)` at `x0`, as a black box on jets at `x0`:
/// `D_{j+1}(s) = a_j D_j(s) - D_j(a_j s)` with `D_0(s)(x0) = Σ_α C_α(x0) α! s_α`.
/// Only jet coefficients up to the largest `|α|` among `coeffs` are ever read.
fn chain_at(coeffs: &[(MultiIndex, Rational)], jet: usize, tuple: &[Poly], s: &Poly) -> Rational {
    match tuple.split_last() {
        None => coeffs.iter().fold(zero(), |acc, (alpha, c)| {
            let factorial: u64 = alpha.exponents().iter().map(|&e| (1..=u64::from(e)).product::<u64>()).product();
            acc + c * s.coefficient(alpha) * Rational::from_integer(factorial.into())
        }),
        Some((a, rest)) => {
            a.constant_term() * chain_at(coeffs, jet, rest, s) - chain_at(coeffs, jet, rest, &truncate(&(a * s), jet))
        }
    }
}

fn criterion_1(ops: &[Operator]) -> Verdict {
    let mut rng = rng_for(1);
    let mut ok = 0;
    for op in ops {
        let n = op.nvars();
        let bx = TestBox::unit(n);
        let jet = op.terms().map(|(alpha, _)| alpha.degree()).max().unwrap_or(0);
        // each probe: a random degree-4 section seen through its jet at a random point
        let probes: Vec<JetProbe> = (0..2)
            .map(|_| {
                let x0 = random::interior_point(&mut rng, &bx);
                let s = random::poly(&mut rng, n, 4);
                let coeffs = op.terms().map(|(alpha, c)| (alpha.clone(), c.get(0, 0).eval(&x0).unwrap())).collect();
                let s = jet_at(&s, &x0, jet);
                (x0, coeffs, s)
            })
            .collect();
        let mut brute = None;
        for k in 0..=MAX_LEVEL {
            let annihilated = (0..50).all(|_| {
                let tuple: Vec<Poly> = (0..=k).map(|_| random::nonconstant_poly(&mut rng, n, 2)).collect();
                probes.iter().all(|(x0, coeffs, s)| {
                    let jets: Vec<Poly> = tuple.iter().map(|a| jet_at(a, x0, jet)).collect();
                    chain_at(coeffs, jet, &jets, s) == zero()
                })
            });
            if annihilated {
                brute = Some(k);
                break;
            }
        }
        // the zero operator has no order; every chain kills it at level 0
        let expected = if op.is_zero() { None } else { brute };
        if op.order() == expected {
            ok += 1;
        }
    }
    verdict(ok, ops.len(), "normal-form orders match the iterated-δ order")
}

fn criterion_2(ops: &[Operator]) -> Verdict {
    let mut rng = rng_for(2);
    let mut ok = 0;
    for op in ops {
        let h = factorize(op).unwrap();
        let mut good = operator_from_jet_hom(&h) == *op;
        let k = op.order().unwrap();
        for _ in 0..10 {
            let s = random::section(&mut rng, op.nvars(), 1, 4);
            let via_jets = h.apply(&jet_prolong(k, &s)).unwrap();
            // hand contraction of the hom matrix with hand-computed partials
            let by_hand = h
                .domain()
                .basis()
                .iter()
                .enumerate()
                .fold(Polynomial::zero(op.nvars()), |acc, (slot, (alpha, i))| {
                    &acc + &(h.matrix().get(0, slot) * &partials(s.component(*i), alpha))
                });
            good &= via_jets == op.apply(&s).unwrap() && via_jets.component(0) == &by_hand;
        }
        ok += usize::from(good);
    }
    verdict(ok, ops.len(), "operators round-trip and act through their jets")
}

fn criterion_3() -> Verdict {
    let (mut ok, mut total) = (0, 0);
    for n in 1..=4 {
        for k in 0..=4 {
            // count exponent vectors in [0, k]^n with sum ≤ k
            let mut count = 0;
            for code in 0..(k + 1usize).pow(n as u32) {
                let mut c = code;
                let mut sum = 0;
                for _ in 0..n {
                    sum += c % (k + 1);
                    c /= k + 1;
                }
                count += usize::from(sum <= k);
            }
            for m in 1..=3 {
                total += 1;
                let space = JetSpace::new(n, m, k);
                if jet_rank(n, k, m) == m * count && space.dim() == m * count && space.basis().len() == m * count {
                    ok += 1;
                }
            }
        }
    }
    verdict(ok, total, "jet ranks agree with enumeration")
}

fn criterion_4() -> Verdict {
    let mut rng = rng_for(4);
    let mut ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let op = random::operator(&mut rng, n, 1, 1, 1, 2);
        let (mult, der) = decompose_first_order(&op).unwrap();
        let one = Sect::scalar(Polynomial::one(n));
        let act = |d: &Operator, f: &Poly| d.apply(&Sect::scalar(f.clone())).unwrap().component(0).clone();
        let a = random::poly(&mut rng, n, 3);
        let b = random::poly(&mut rng, n, 3);
        let reassembled = NormalOperator::scalar_multiplication(mult.clone(), 1).add(&der).unwrap() == op;
        let unit = op.apply(&one).unwrap().component(0) == &mult && act(&der, &Polynomial::one(n)).is_zero();
        let leibniz = act(&der, &(&a * &b)) == &(&act(&der, &a) * &b) + &(&a * &act(&der, &b));
        ok += usize::from(reassembled && unit && leibniz);
    }
    verdict(ok, 100, "first-order operators split into multiplier plus derivation")
}

fn criterion_5() -> Verdict {
    let mut rng = rng_for(5);
    let mut ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let u: Vec<Poly> = (0..n).map(|_| random::poly(&mut rng, n, 2)).collect();
        let f = random::poly(&mut rng, n, 3);
        ok += usize::from(d1(&f).pair(&u).unwrap() == along(&u, &f));
    }
    verdict(ok, 100, "d¹f paired with u reproduces u(f)")
}

fn criterion_6() -> Verdict {
    let mut rng = rng_for(6);
    let mut ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let gamma: Vec<_> = (0..n).map(|_| random::matrix(&mut rng, n, m, m, 2)).collect();
        let conn = Connection::new(gamma.clone()).unwrap();
        let u: Vec<Poly> = (0..n).map(|_| random::poly(&mut rng, n, 2)).collect();
        let f = random::poly(&mut rng, n, 2);
        let s = random::section(&mut rng, n, m, 2);
        let lhs = conn.along(&u, &s.mul_poly(&f)).unwrap();
        let rhs = s.mul_poly(&along(&u, &f)).add(&conn.along(&u, &s).unwrap().mul_poly(&f));
        // ∇_u s by hand: u^μ (∂_μ s + Γ_μ s)
        let by_hand = (0..n).fold(Sect::zero(n, m), |acc, mu| {
            acc.add(&s.partial(mu).unwrap().add(&gamma[mu].apply(&s)).mul_poly(&u[mu]))
        });

        // corruptions: section slots scaled by x, and the non-linear s ↦ J¹s
        let split = conn.splitting();
        let x = Polynomial::var(n, 0);
        let c = split.zero_order_part();
        let scaled = PolyMatrix::from_rows(
            n,
            (0..c.rows())
                .map(|r| {
                    c.row_entries(r)
                        .iter()
                        .map(|e| if r < m { e * &x } else { e.clone() })
                        .collect()
                })
                .collect(),
        );
        let j1 = JetSpace::new(n, m, 1);
        let prolongation = NormalOperator::from_terms(
            n,
            m,
            j1.dim(),
            j1.basis().iter().enumerate().map(|(slot, (alpha, i))| {
                let mut e: PolyMatrix<Rational> = PolyMatrix::zero(n, j1.dim(), m);
                e.set(slot, *i, Polynomial::one(n));
                (alpha.clone(), e)
            }),
        );
        let detects = conn.check_splitting()
            && !check_splitting(&NormalOperator::multiplication(scaled), m)
            && !check_splitting(&prolongation, m);
        ok += usize::from(lhs == rhs && conn.along(&u, &s).unwrap() == by_hand && detects);
    }
    verdict(ok, 50, "connections obey Leibniz and corrupted splittings are caught")
}

/// `⟨s, ψ⟩` from scratch: derivatives of the realized section at points, and
/// the box integral of the density product.
fn pair_by_hand(s: &Sect, bx: &RBox, psi: &Dist) -> Rational {
    let mut acc = zero();
    for pf in psi.points() {
        acc += partials(s.component(pf.fiber), &pf.alpha).eval(&pf.point).unwrap() * &pf.coeff;
    }
    if let Some(d) = psi.realized_density() {
        for (a, b) in s.components().iter().zip(d.components()) {
            acc += (a * b).integrate_box(bx.lower(), bx.upper());
        }
    }
    acc
}

fn criterion_7() -> Verdict {
    let mut rng = rng_for(7);
    let bx = TestBox::new(vec![q(-1, 2), q(0, 1)], vec![q(1, 1), q(3, 2)]).unwrap();
    let mut ok = 0;
    for _ in 0..100 {
        let k = rng.gen_range(0..=3);
        let m = rng.gen_range(1..=2);
        let op = random::operator(&mut rng, 2, m, m, k, 2);
        let s: TestFn = random::test_section(&mut rng, &bx, k as u32 + 1, m, 2);
        let psi = random::distribution(&mut rng, &bx, m, 3, 2, 2, true);
        let lhs = pair_by_hand(&op.apply(&s.realize()).unwrap(), &bx, &psi);
        let rhs = pair(&s, &transpose(&op).apply(&psi).unwrap()).unwrap();
        ok += usize::from(lhs == rhs);
    }
    verdict(ok, 100, "⟨Δs, ψ⟩ = ⟨s, Δ′ψ⟩ exactly")
}

fn criterion_8() -> Verdict {
    let mut rng = rng_for(8);
    let bx = TestBox::unit(2);
    let mut ok = 0;
    for _ in 0..20 {
        let k = rng.gen_range(1..=2);
        let op = random::operator(&mut rng, 2, 1, 1, k, 2);
        let f = random::nonconstant_poly(&mut rng, 2, 2);
        let dt = transpose(&op);
        let rhs_op = transpose(&delta(&f, &op).unwrap().neg());
        let mut good = true;
        for _ in 0..50 {
            let with_density = rng.gen_bool(0.5);
            let psi = random::distribution(&mut rng, &bx, 1, 2, 2, 2, with_density);
            // (δ_f Δ′)ψ = f Δ′ψ - Δ′(f ψ)
            let lhs = mul_dist(&f, &dt.apply(&psi).unwrap())
                .unwrap()
                .add(&dt.apply(&mul_dist(&f, &psi).unwrap()).unwrap().neg())
                .unwrap();
            good &= lhs == rhs_op.apply(&psi).unwrap();
        }
        ok += usize::from(good);
    }
    verdict(ok, 20, "δ_f(Δ′) = (−δ_f Δ)′ on 50 probes each")
}

fn criterion_9() -> Verdict {
    let mut rng = rng_for(9);
    let bx = TestBox::unit(2);
    let mut ok = 0;
    let total = 20;
    for _ in 0..total {
        let u: Vec<Poly> = (0..2).map(|_| random::poly(&mut rng, 2, 2)).collect();
        let density = random::poly(&mut rng, 2, 2);
        let psi = Dist::from_density(Sect::scalar(density.clone()));
        let formula = (0..2).fold(Polynomial::zero(2), |acc, mu| {
            &acc - &(&u[mu] * &density).partial(mu).unwrap()
        });
        let expected = Dist::from_density(Sect::scalar(formula));
        let lie = lie_derivative_dist(&u, &psi).unwrap();
        let mut good = lie == expected;
        for _ in 0..20 {
            let s: TestFn = random::test_section(&mut rng, &bx, 2, 1, 2);
            let us = Sect::scalar(along(&u, s.realize().component(0)));
            good &= pair_by_hand(&us, &bx, &psi) == pair(&s, &lie).unwrap();
        }
        let f = random::poly(&mut rng, 2, 2);
        let left = lie_derivative_dist(&u, &mul_dist(&f, &psi).unwrap()).unwrap();
        let right = mul_dist(&-along(&u, &f), &psi)
            .unwrap()
            .add(&mul_dist(&f, &lie).unwrap())
            .unwrap();
        good &= left == right;
        ok += usize::from(good);
    }
    verdict(ok, total, "Lie derivatives match −∂_μ(u^μψ̄) and the derivation rule")
}

fn criterion_10() -> Verdict {
    let mut rng = rng_for(10);
    let mut ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let k = rng.gen_range(0..=2);
        let op = random::operator(&mut rng, n, 1, 1, k, 2);
        let bounds = RecoveryBounds {
            bx: TestBox::unit(n),
            order: 2,
            degree: 2,
        };
        let blackbox = |t: &TestFn| TestSection::new(t.test_box().clone(), 0, op.apply(&t.realize())?);
        ok += usize::from(recover_coefficients(blackbox, &bounds, 1, 1).ok() == Some(op.clone()));
    }
    verdict(ok, 50, "operators recovered from their action on test sections")
}

fn criterion_11() -> Verdict {
    let mut rng = rng_for(11);
    let mut ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let k = rng.gen_range(0..=2);
        let op = random::operator(&mut rng, n, 1, 1, k, 2);
        let bounds = RecoveryBounds {
            bx: TestBox::unit(n),
            order: 2,
            degree: 2,
        };
        let restored = restricts_to_test(&transpose(&op), &bounds).unwrap();
        let stripped = restricts_to_test(&transpose(&op).strip_embedding(), &bounds).unwrap();
        ok += usize::from(restored == Some(op) && stripped.is_none());
    }
    verdict(ok, 50, "transposes restrict to their operator; stripped ones do not restrict")
}

fn criterion_12() -> Verdict {
    let mut rng = rng_for(12);
    let s = TestSection::new(TestBox::unit(1), 1, Sect::scalar(Polynomial::one(1))).unwrap();
    let slot0 = FiberJetFunction::slot(1, 1, MultiIndex::zero(1), 0);
    let slot1 = FiberJetFunction::slot(1, 1, MultiIndex::unit(1, 0), 0);
    let sup0 = seminorm(&slot0, &s, 1 << 10).unwrap().value;
    let sup1 = seminorm(&slot1, &s, 1 << 10).unwrap().value;
    let mut ok = usize::from((sup0 - 0.25).abs() < 1e-6) + usize::from((sup1 - 1.0).abs() < 1e-6);
    let bx = TestBox::unit(1);
    for _ in 0..10 {
        let t: TestFn = random::test_section(&mut rng, &bx, 3, 2, 2);
        let phi = FiberJetFunction::from_operator(&random::operator(&mut rng, 1, 1, 1, 1, 1), 1).unwrap();
        let sigma = random::section(&mut rng, 1, 2, 1);
        let a = seminorm(&phi, &t.contract_dual(&sigma).unwrap(), 1 << 10).unwrap().value;
        let b = seminorm(&phi.through_contraction(&sigma).unwrap(), &t, 1 << 10).unwrap().value;
        let d = random::operator(&mut rng, 1, 2, 2, 1, 1);
        let phi2 = FiberJetFunction::from_operator(&random::operator(&mut rng, 1, 2, 1, 1, 1), 1).unwrap();
        let c = seminorm(&phi2, &t.apply_operator(&d).unwrap(), 1 << 10).unwrap().value;
        let e = seminorm(&phi2.through_operator(&d).unwrap(), &t, 1 << 10).unwrap().value;
        ok += usize::from((a - b).abs() < 1e-6 && (c - e).abs() < 1e-6);
    }
    Verdict {
        passed: ok == 12,
        detail: format!("sup x(1−x) ≈ {sup0:.9}, sup |1−2x| ≈ {sup1:.9}; {ok}/12 checks within 1e-6"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ops = operator_batch();
    #[allow(clippy::type_complexity)]
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("order agrees with the commutator definition", Box::new(|| criterion_1(&ops))),
        ("factorization through jets", Box::new(|| criterion_2(&ops))),
        ("jet ranks", Box::new(criterion_3)),
        ("first-order decomposition", Box::new(criterion_4)),
        ("one-form duality", Box::new(criterion_5)),
        ("connection Leibniz rule", Box::new(criterion_6)),
        ("adjoint identity", Box::new(criterion_7)),
        ("δ of a transpose", Box::new(criterion_8)),
        ("Lie derivative of distributions", Box::new(criterion_9)),
        ("operator recovery", Box::new(criterion_10)),
        ("restriction criterion", Box::new(criterion_11)),
        ("seminorm estimates", Box::new(criterion_12)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        failures += usize::from(!v.passed);
        println!(
            "criterion {:>2} {} {name}: {} ({:.1}s)",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
