//! The property suite behind `jetform verify-all`.
//!
//! Every property draws from its own generator seeded by `(seed, index)`,
//! so outcomes do not depend on scheduling. Properties run on separate
//! threads and are reported in suite order.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffop::{
    decompose_first_order, delta, from_vector_field, order_by_definition, vector_field, NormalOperator,
};
use crate::dist::{
    adjoint_check, delta_dist, dist_op_order, evaluation_probes, lie_derivative_dist, mul_dist, pair,
    recover_coefficients, restricts_to_test, transpose, RecoveryBounds,
};
use crate::jet::{check_splitting, d1, factorize, jet_prolong, jet_rank, operator_from_jet_hom, Connection};
use crate::random;
use crate::ring::{MultiIndex, PolyMatrix, Polynomial, Section};
use crate::testspace::{seminorm, FiberJetFunction, TestBox, TestSection};
use crate::{parse_operator, Dist, Operator, Rational};

/// Result of one property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of cases checked, or the failing case's description.
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> Result<usize, String>;

const SUITE: &[(&str, Check)] = &[
    ("order-matches-definition", order_matches_definition),
    ("factorization-round-trip", factorization_round_trip),
    ("jet-rank-enumeration", jet_rank_enumeration),
    ("first-order-decomposition", first_order_decomposition),
    ("one-form-duality", one_form_duality),
    ("connection-leibniz", connection_leibniz),
    ("adjoint-identity", adjoint_identity),
    ("delta-of-transpose", delta_of_transpose),
    ("lie-derivative", lie_derivative),
    ("operator-recovery", operator_recovery),
    ("restriction-criterion", restriction_criterion),
    ("seminorm", seminorm_properties),
    ("delta-commutativity", delta_commutativity),
    ("transpose-antihomomorphism", transpose_antihomomorphism),
    ("integration-by-parts", integration_by_parts),
    ("literal-round-trip", literal_round_trip),
];

pub fn property_names() -> Vec<&'static str> {
    SUITE.iter().map(|(name, _)| *name).collect()
}

/// Runs every property with generators derived from `seed`.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    thread::scope(|scope| {
        let handles: Vec<_> = SUITE
            .iter()
            .enumerate()
            .map(|(index, &(name, check))| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(index as u64);
                    let result = check(&mut rng);
                    Outcome {
                        name,
                        passed: result.is_ok(),
                        detail: match result {
                            Ok(cases) => format!("{cases} cases"),
                            Err(why) => why,
                        },
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("property panicked"))
            .collect()
    })
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_shape(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    (rng.gen_range(1..=3), rng.gen_range(0..=3), rng.gen_range(0..=3))
}

fn order_matches_definition(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let (n, k, deg) = random_shape(rng);
        let op = random::operator(rng, n, 1, 1, k, deg);
        let mut sampler = ChaCha8Rng::seed_from_u64(rng.gen());
        let by_def = order_by_definition(&op, 5, 50, || random::nonconstant_poly(&mut sampler, n, 2))
            .map_err(err)?;
        ensure(by_def == op.order(), || format!("{op}: definition gives {by_def:?}"))?;
    }
    Ok(100)
}

fn factorization_round_trip(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let (n, k, deg) = random_shape(rng);
        let m_in = rng.gen_range(1..=2);
        let m_out = rng.gen_range(1..=2);
        let op = random::operator(rng, n, m_in, m_out, k, deg);
        let h = factorize(&op).map_err(err)?;
        ensure(operator_from_jet_hom(&h) == op, || format!("{op}: round trip"))?;
        for _ in 0..10 {
            let s = random::section(rng, n, m_in, 3);
            let via_jets = h.apply(&jet_prolong(k, &s)).map_err(err)?;
            ensure(via_jets == op.apply(&s).map_err(err)?, || format!("{op} on {s}"))?;
        }
    }
    Ok(100)
}

fn jet_rank_enumeration(_: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=4 {
        for k in 0..=4 {
            for m in 1..=3 {
                let count = MultiIndex::up_to(n, k).len() * m;
                ensure(jet_rank(n, k, m) == count, || format!("n={n} k={k} m={m}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn first_order_decomposition(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let op = random::operator(rng, n, 1, 1, 1, 2);
        let (qq, d) = decompose_first_order(&op).map_err(err)?;
        let back = NormalOperator::scalar_multiplication(qq, 1).add(&d).map_err(err)?;
        ensure(back == op, || format!("{op}: reassembly"))?;
        let a = random::poly(rng, n, 2);
        let b = random::poly(rng, n, 2);
        let apply = |f: &Polynomial<Rational>| d.apply(&Section::scalar(f.clone())).map(|s| s.component(0).clone());
        let lhs = apply(&(&a * &b)).map_err(err)?;
        let rhs = &(&apply(&a).map_err(err)? * &b) + &(&a * &apply(&b).map_err(err)?);
        ensure(lhs == rhs, || format!("{d}: Leibniz"))?;
        ensure(vector_field(&d).is_some(), || format!("{d}: not a vector field"))?;
    }
    Ok(100)
}

fn one_form_duality(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let u: Vec<_> = (0..n).map(|_| random::poly(rng, n, 2)).collect();
        let f = random::poly(rng, n, 3);
        let paired = d1(&f).pair(&u).map_err(err)?;
        let direct = from_vector_field(&u).apply(&Section::scalar(f.clone())).map_err(err)?;
        ensure(&paired == direct.component(0), || format!("u = {u:?}, f = {f}"))?;
    }
    Ok(100)
}

fn connection_leibniz(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=2);
        let gamma = (0..n).map(|_| random::matrix(rng, n, m, m, 2)).collect();
        let conn = Connection::new(gamma).map_err(err)?;
        let u: Vec<_> = (0..n).map(|_| random::poly(rng, n, 2)).collect();
        let f = random::poly(rng, n, 2);
        let s = random::section(rng, n, m, 2);
        let lhs = conn.along(&u, &s.mul_poly(&f)).map_err(err)?;
        let uf = d1(&f).pair(&u).map_err(err)?;
        let rhs = s.mul_poly(&uf).add(&conn.along(&u, &s).map_err(err)?.mul_poly(&f));
        ensure(lhs == rhs, || format!("Leibniz fails for Γ = {:?}", conn.gamma()))?;
        ensure(conn.check_splitting(), || "canonical splitting rejected".into())?;

        let split = conn.splitting();
        let x = Polynomial::var(n, 0);
        let scaled = PolyMatrix::from_rows(
            n,
            (0..split.output_rank())
                .map(|slot| {
                    let row = split.zero_order_part().row_entries(slot).to_vec();
                    if slot < m {
                        row.iter().map(|e| e * &x).collect()
                    } else {
                        row
                    }
                })
                .collect(),
        );
        let corrupted = NormalOperator::multiplication(scaled);
        ensure(!check_splitting(&corrupted, m), || "corrupted splitting accepted".into())?;
    }
    Ok(50)
}

fn adjoint_identity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let bx = TestBox::new(vec![q(0, 1), q(-1, 2)], vec![q(1, 1), q(1, 1)]).map_err(err)?;
    for _ in 0..100 {
        let k = rng.gen_range(0..=3);
        let m = rng.gen_range(1..=2);
        let op = random::operator(rng, 2, m, m, k, 2);
        let s = random::test_section(rng, &bx, k as u32 + 1, m, 2);
        let psi = random::distribution(rng, &bx, m, 3, 2, 2, true);
        ensure(adjoint_check(&op, &s, &psi).map_err(err)?, || format!("{op}"))?;
    }
    Ok(100)
}

fn delta_of_transpose(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let bx = TestBox::unit(2);
    for _ in 0..20 {
        let k = rng.gen_range(1..=2);
        let op = random::operator(rng, 2, 1, 1, k, 2);
        let f = random::nonconstant_poly(rng, 2, 2);
        let lhs = delta_dist(&f, &transpose(&op)).map_err(err)?;
        let rhs = transpose(&delta(&f, &op).map_err(err)?.neg());
        for _ in 0..50 {
            let with_density = rng.gen_bool(0.5);
            let psi = random::distribution(rng, &bx, 1, 2, 2, 2, with_density);
            ensure(lhs.apply(&psi).map_err(err)? == rhs.apply(&psi).map_err(err)?, || {
                format!("f = {f}, Δ = {op}")
            })?;
        }
    }
    Ok(20)
}

fn lie_derivative(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let bx = TestBox::new(vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(1, 1)]).map_err(err)?;
    for _ in 0..20 {
        let u: Vec<_> = (0..2).map(|_| random::poly(rng, 2, 2)).collect();
        let psi = random::distribution(rng, &bx, 1, 2, 1, 2, true);
        let lie = lie_derivative_dist(&u, &psi).map_err(err)?;
        let field = from_vector_field(&u);
        for _ in 0..20 {
            let s = random::test_section(rng, &bx, 2, 1, 2);
            let lhs = pair(&s.apply_operator(&field).map_err(err)?, &psi).map_err(err)?;
            ensure(lhs == pair(&s, &lie).map_err(err)?, || format!("u = {u:?}"))?;
        }
        let f = random::poly(rng, 2, 2);
        let left = lie_derivative_dist(&u, &mul_dist(&f, &psi).map_err(err)?).map_err(err)?;
        let uf = d1(&f).pair(&u).map_err(err)?;
        let right = mul_dist(&-uf, &psi)
            .and_then(|a| a.add(&mul_dist(&f, &lie)?))
            .map_err(err)?;
        ensure(left == right, || format!("derivation rule, u = {u:?}, f = {f}"))?;
    }
    Ok(20)
}

fn operator_recovery(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let k = rng.gen_range(0..=2);
        let op = random::operator(rng, n, 1, 1, k, 2);
        let bounds = RecoveryBounds {
            bx: TestBox::unit(n),
            order: 2,
            degree: 2,
        };
        let got = recover_coefficients(|t| t.apply_operator(&op), &bounds, 1, 1).map_err(err)?;
        ensure(got == op, || format!("{op} recovered as {got}"))?;
    }
    Ok(50)
}

fn restriction_criterion(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let k = rng.gen_range(0..=2);
        let op = random::operator(rng, n, 1, 1, k, 2);
        let bounds = RecoveryBounds {
            bx: TestBox::unit(n),
            order: 2,
            degree: 2,
        };
        let got = restricts_to_test(&transpose(&op), &bounds).map_err(err)?;
        ensure(got.as_ref() == Some(&op), || format!("{op} restricted to {got:?}"))?;
        let stripped = restricts_to_test(&transpose(&op).strip_embedding(), &bounds).map_err(err)?;
        ensure(stripped.is_none() || op.is_zero(), || format!("{op}: stripped operator restricts"))?;
    }
    Ok(50)
}

fn seminorm_properties(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let s = TestSection::<Rational>::new(TestBox::unit(1), 1, Section::scalar(Polynomial::one(1))).map_err(err)?;
    let slot0 = FiberJetFunction::slot(1, 1, MultiIndex::zero(1), 0);
    let est = seminorm(&slot0, &s, 1 << 10).map_err(err)?;
    ensure((est.value - 0.25).abs() < 1e-6, || format!("sup x(1-x) estimated as {}", est.value))?;

    let bx = TestBox::unit(1);
    for _ in 0..10 {
        let t = random::test_section(rng, &bx, 3, 2, 2);
        let phi_op = random::operator(rng, 1, 1, 1, 1, 1);
        let phi = FiberJetFunction::from_operator(&phi_op, 1).map_err(err)?;
        let sigma = random::section(rng, 1, 2, 1);
        let lhs = seminorm(&phi, &t.contract_dual(&sigma).map_err(err)?, 256).map_err(err)?;
        let rhs = seminorm(&phi.through_contraction(&sigma).map_err(err)?, &t, 256).map_err(err)?;
        ensure((lhs.value - rhs.value).abs() < 1e-6, || "contraction compatibility".into())?;

        let d = random::operator(rng, 1, 2, 2, 1, 1);
        let phi2 = FiberJetFunction::from_operator(&random::operator(rng, 1, 2, 1, 1, 1), 1).map_err(err)?;
        let lhs = seminorm(&phi2, &t.apply_operator(&d).map_err(err)?, 256).map_err(err)?;
        let rhs = seminorm(&phi2.through_operator(&d).map_err(err)?, &t, 256).map_err(err)?;
        ensure((lhs.value - rhs.value).abs() < 1e-6, || "operator compatibility".into())?;
    }
    Ok(21)
}

fn delta_commutativity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..50 {
        let (n, k, deg) = random_shape(rng);
        let op = random::operator(rng, n, 1, 1, k, deg);
        let a = random::poly(rng, n, 2);
        let b = random::poly(rng, n, 2);
        let ab = delta(&a, &delta(&b, &op).map_err(err)?).map_err(err)?;
        let ba = delta(&b, &delta(&a, &op).map_err(err)?).map_err(err)?;
        ensure(ab == ba, || format!("{op}"))?;
        let drop = delta(&a, &op).map_err(err)?;
        ensure(drop.order().is_none_or(|d| Some(d + 1) <= op.order()), || {
            format!("δ does not lower the order of {op}")
        })?;
    }
    Ok(50)
}

fn transpose_antihomomorphism(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let bx = TestBox::unit(2);
    for _ in 0..20 {
        let ka = rng.gen_range(0..=2);
        let a = random::operator(rng, 2, 2, 1, ka, 2);
        let kb = rng.gen_range(0..=2);
        let b = random::operator(rng, 2, 1, 2, kb, 2);
        let composed = transpose(&a.compose(&b).map_err(err)?);
        let reversed = transpose(&b).compose(&transpose(&a)).map_err(err)?;
        for _ in 0..5 {
            let psi = random::distribution(rng, &bx, 1, 2, 2, 2, true);
            ensure(composed.apply(&psi).map_err(err)? == reversed.apply(&psi).map_err(err)?, || {
                format!("({a}) ∘ ({b})")
            })?;
        }
    }
    Ok(20)
}

fn integration_by_parts(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let bx = TestBox::new(vec![q(-1, 1), q(0, 1)], vec![q(1, 2), q(2, 1)]).map_err(err)?;
    for _ in 0..30 {
        let p = rng.gen_range(1..=3);
        let t = random::test_section(rng, &bx, p, 1, 3);
        let a = random::poly(rng, 2, 2);
        let axis = rng.gen_range(0..2);
        let d = Operator::partial(2, 1, axis).map_err(err)?;
        let dt = t.apply_operator_exhausting(&d).map_err(err)?;
        ensure(dt.integrate(0).map_err(err)? == Rational::from_integer(0.into()), || "∫∂t ≠ 0".into())?;
        let da = a.partial(axis).map_err(err)?;
        let lhs = t.mul_scalar(&da).map_err(err)?.integrate(0).map_err(err)?;
        let rhs = -dt.mul_scalar(&a).map_err(err)?.integrate(0).map_err(err)?;
        ensure(lhs == rhs, || format!("∫(∂a)t ≠ -∫a∂t for a = {a}"))?;
        ensure(t.vanishes_on_boundary(3), || "boundary vanishing".into())?;
    }
    Ok(30)
}

fn literal_round_trip(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..50 {
        let (n, k, deg) = random_shape(rng);
        let m = rng.gen_range(1..=2);
        let op = random::operator(rng, n, m, m, k, deg);
        let text = op.to_string();
        let back = parse_operator(&text, n).and_then(|e| e.normalize()).map_err(err)?;
        ensure(back == op, || format!("{text} re-parsed as {back}"))?;
        let psi: Dist = random::distribution(rng, &TestBox::unit(n), m, 2, 2, 2, true);
        let dto = crate::serial::DistributionDto::from(&psi);
        let decoded = dto.decode(&TestBox::unit(n), Some(m)).map_err(err)?;
        ensure(decoded == psi, || "distribution JSON round trip".into())?;
    }
    let probes = evaluation_probes(&[vec![q(1, 2)]], 1, 2);
    let order = dist_op_order(
        &transpose(&parse_operator("dx^2", 1).and_then(|e| e.normalize()).map_err(err)?),
        &probes,
        4,
        3,
        rng,
        |r| random::nonconstant_poly(r, 1, 2),
    )
    .map_err(err)?;
    ensure(order == Some(2), || format!("order of transpose(dx^2) on distributions: {order:?}"))?;
    Ok(51)
}
