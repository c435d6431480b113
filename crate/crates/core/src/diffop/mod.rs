//! Differential operators between free modules over the model ring.
//!
//! Operators live in normal form `Σ C_α ∂^α`. The commutator calculus
//! `δ_a Δ = a Δ - Δ ∘ a` characterizes order: `Δ` has order `≤ k` iff every
//! `(k+1)`-fold chain `δ_{a_0} ⋯ δ_{a_k} Δ` vanishes.

mod expr;
mod operator;

pub use expr::OperatorExpr;
pub use operator::NormalOperator;

use crate::error::{Error, Result};
use crate::ring::{MultiIndex, PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// `δ_a Δ = a·Δ - Δ∘(a·)`, in normal form.
///
/// Computed as `-Σ_α Σ_{0<γ≤α} (α choose γ) C_α (∂^γ a) ∂^{α-γ}`: the
/// `γ = 0` Leibniz terms cancel against `a·Δ`. For nonzero `Δ` the result
/// has strictly smaller order.
pub fn delta<C: Scalar>(a: &Polynomial<C>, op: &NormalOperator<C>) -> Result<NormalOperator<C>> {
    if a.nvars() != op.nvars() {
        return Err(Error::DimensionMismatch {
            expected: op.nvars(),
            found: a.nvars(),
        });
    }
    let mut terms = Vec::new();
    for (alpha, c) in op.terms() {
        for gamma in alpha.sub_indices() {
            if gamma.is_zero() {
                continue;
            }
            let da = a.derivative(&gamma);
            if da.is_zero() {
                continue;
            }
            let binom: C = alpha.binomial(&gamma);
            let rest = alpha.checked_sub(&gamma).expect("gamma ≤ alpha");
            terms.push((rest, c.map(|p| (p * &da).scale(&-binom.clone()))));
        }
    }
    Ok(NormalOperator::from_terms(op.nvars(), op.input_rank(), op.output_rank(), terms))
}

/// Applies `δ_{a_0} ∘ ⋯ ∘ δ_{a_k}` (innermost `a_k` first).
pub fn delta_chain<C: Scalar>(
    tuple: &[Polynomial<C>],
    op: &NormalOperator<C>,
) -> Result<NormalOperator<C>> {
    tuple.iter().rev().try_fold(op.clone(), |acc, a| {
        if acc.is_zero() {
            Ok(acc)
        } else {
            delta(a, &acc)
        }
    })
}

/// Order read off the order condition rather than the normal form: the
/// smallest `k` such that `trials` sampled `(k+1)`-tuples all annihilate
/// `op` while some sampled `k`-tuple does not.
///
/// Returns `Ok(None)` for the zero operator and an error if no `k ≤
/// max_order` works.
pub fn order_by_definition<C: Scalar>(
    op: &NormalOperator<C>,
    max_order: usize,
    trials: usize,
    mut sample: impl FnMut() -> Polynomial<C>,
) -> Result<Option<usize>> {
    if op.is_zero() {
        return Ok(None);
    }
    // Invariant: some sampled k-tuple leaves op nonzero (the empty tuple for k = 0).
    for k in 0..=max_order {
        let mut all_vanish = true;
        for _ in 0..trials.max(1) {
            let tuple: Vec<_> = (0..=k).map(|_| sample()).collect();
            if !delta_chain(&tuple, op)?.is_zero() {
                all_vanish = false;
                break;
            }
        }
        if all_vanish {
            return Ok(Some(k));
        }
    }
    Err(Error::Invalid(format!(
        "no order ≤ {max_order} annihilates the sampled commutator chains"
    )))
}

/// Splits a first-order scalar operator into `q·(·) + D` with `q = Δ(1)`
/// and `D` a derivation.
pub fn decompose_first_order<C: Scalar>(
    op: &NormalOperator<C>,
) -> Result<(Polynomial<C>, NormalOperator<C>)> {
    if !op.is_scalar() {
        return Err(Error::RankMismatch {
            expected: 1,
            found: op.input_rank().max(op.output_rank()),
        });
    }
    match op.order() {
        Some(k) if k > 1 => return Err(Error::NotFirstOrder(k)),
        _ => {}
    }
    let q = op
        .apply(&Section::scalar(Polynomial::one(op.nvars())))?
        .into_components()
        .remove(0);
    let d = op.sub(&NormalOperator::scalar_multiplication(q.clone(), 1))?;
    Ok((q, d))
}

/// `a ↦ Δ(a p)`: the operator on `A` attached to `p`.
pub fn curry<C: Scalar>(op: &NormalOperator<C>, p: &Section<C>) -> Result<NormalOperator<C>> {
    p.check_rank(op.input_rank())?;
    p.check_nvars(op.nvars())?;
    op.compose(&NormalOperator::multiplication(PolyMatrix::column(p)))
}

/// The derivation `u^μ ∂_μ`.
pub fn from_vector_field<C: Scalar>(u: &[Polynomial<C>]) -> NormalOperator<C> {
    let nvars = u.first().map_or(0, Polynomial::nvars);
    assert_eq!(u.len(), nvars, "vector field needs one component per axis");
    NormalOperator::from_terms(
        nvars,
        1,
        1,
        u.iter().enumerate().map(|(axis, c)| {
            (
                MultiIndex::unit(nvars, axis),
                PolyMatrix::scalar(c.clone(), 1),
            )
        }),
    )
}

/// Components `u^μ` if `op` is a derivation of `A` (scalar, order ≤ 1,
/// killing the unit).
pub fn vector_field<C: Scalar>(op: &NormalOperator<C>) -> Option<Vec<Polynomial<C>>> {
    if !op.is_scalar() || op.order().unwrap_or(0) > 1 || !op.zero_order_part().is_zero() {
        return None;
    }
    let n = op.nvars();
    Some(
        (0..n)
            .map(|axis| {
                op.coefficient_or_zero(&MultiIndex::unit(n, axis))
                    .get(0, 0)
                    .clone()
            })
            .collect(),
    )
}
