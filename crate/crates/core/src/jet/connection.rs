use super::space::JetSpace;
use crate::diffop::{delta, NormalOperator};
use crate::error::{Error, Result};
use crate::ring::{MultiIndex, PolyMatrix, Polynomial, Section};
use crate::scalar::Scalar;

/// Linear connection on a rank-`m` trivial bundle:
/// `∇_μ s = ∂_μ s + Γ_μ s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<C> {
    nvars: usize,
    rank: usize,
    gamma: Vec<PolyMatrix<C>>,
}

impl<C: Scalar> Connection<C> {
    /// One `m × m` matrix per axis.
    pub fn new(gamma: Vec<PolyMatrix<C>>) -> Result<Self> {
        let nvars = gamma.len();
        let rank = gamma.first().map_or(0, PolyMatrix::rows);
        for g in &gamma {
            if g.rows() != rank || g.cols() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: g.cols(),
                });
            }
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
        }
        Ok(Connection { nvars, rank, gamma })
    }

    /// `Γ = 0`, the canonical flat connection `∇ = d`.
    pub fn flat(nvars: usize, rank: usize) -> Self {
        Connection {
            nvars,
            rank,
            gamma: vec![PolyMatrix::zero(nvars, rank, rank); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gamma(&self) -> &[PolyMatrix<C>] {
        &self.gamma
    }

    /// `(∇_μ s)_μ`.
    pub fn covariant_differential(&self, s: &Section<C>) -> Result<Vec<Section<C>>> {
        s.check_rank(self.rank)?;
        s.check_nvars(self.nvars)?;
        (0..self.nvars)
            .map(|mu| Ok(s.partial(mu)?.add(&self.gamma[mu].apply(s))))
            .collect()
    }

    /// `∇_u s = u^μ ∇_μ s`.
    pub fn along(&self, u: &[Polynomial<C>], s: &Section<C>) -> Result<Section<C>> {
        self.check_field(u)?;
        let parts = self.covariant_differential(s)?;
        Ok(u.iter()
            .zip(&parts)
            .fold(Section::zero(self.nvars, self.rank), |acc, (c, p)| {
                acc.add(&p.mul_poly(c))
            }))
    }

    /// `∇_u` as a first-order operator on sections.
    pub fn operator_along(&self, u: &[Polynomial<C>]) -> Result<NormalOperator<C>> {
        self.check_field(u)?;
        let mut out = NormalOperator::zero(self.nvars, self.rank, self.rank);
        for (mu, c) in u.iter().enumerate() {
            let d = NormalOperator::partial(self.nvars, self.rank, mu)?
                .add(&NormalOperator::multiplication(self.gamma[mu].clone()))?;
            out = out.add(&d.mul_poly(c))?;
        }
        Ok(out)
    }

    fn check_field(&self, u: &[Polynomial<C>]) -> Result<()> {
        if u.len() != self.nvars {
            return Err(Error::RankMismatch {
                expected: self.nvars,
                found: u.len(),
            });
        }
        Ok(())
    }

    /// The splitting `Γ = J¹ - ∇ : P → J¹(P)`, `s ↦ (s, -Γ_μ s)` in jet
    /// coordinates, as a zero-order operator.
    pub fn splitting(&self) -> NormalOperator<C> {
        let space = JetSpace::new(self.nvars, self.rank, 1);
        let mut m = PolyMatrix::zero(self.nvars, space.dim(), self.rank);
        for (slot, (alpha, i)) in space.basis().iter().enumerate() {
            match alpha.exponents().iter().position(|&e| e == 1) {
                None => m.set(slot, *i, Polynomial::one(self.nvars)),
                Some(mu) => {
                    for j in 0..self.rank {
                        m.set(slot, j, -self.gamma[mu].get(*i, j));
                    }
                }
            }
        }
        NormalOperator::multiplication(m)
    }

    pub fn check_splitting(&self) -> bool {
        check_splitting(&self.splitting(), self.rank)
    }
}

/// Whether `split : P → J¹(P)` is an A-linear splitting of
/// `0 → O¹⊗P → J¹(P) → P → 0`, i.e. commutes with multiplication and
/// satisfies `π¹₀ ∘ split = id` on probe sections.
pub fn check_splitting<C: Scalar>(split: &NormalOperator<C>, rank: usize) -> bool {
    let n = split.nvars();
    let space = JetSpace::new(n, rank, 1);
    if split.input_rank() != rank || split.output_rank() != space.dim() {
        return false;
    }
    let linear = (0..n).all(|mu| {
        delta(&Polynomial::var(n, mu), split)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    });
    if !linear {
        return false;
    }
    let mut probes = Vec::new();
    for i in 0..rank {
        let e = Section::basis(n, rank, i);
        probes.push(e.clone());
        for mu in 0..n {
            probes.push(e.mul_poly(&Polynomial::var(n, mu)));
        }
        let bump = (0..n).fold(Polynomial::one(n), |acc, mu| {
            &acc * &(&Polynomial::var(n, mu) + &Polynomial::constant(n, C::from_i64_exact(2)))
        });
        probes.push(e.mul_poly(&bump));
    }
    probes.iter().all(|s| match split.apply(s) {
        Ok(j) => (0..rank).all(|i| {
            let slot = space
                .slot(&MultiIndex::zero(n), i)
                .expect("0-jet slot exists");
            j.component(slot) == s.component(i)
        }),
        Err(_) => false,
    })
}
