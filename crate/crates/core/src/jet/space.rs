use crate::error::{Error, Result};
use crate::ring::{MultiIndex, Polynomial, Section};
use crate::scalar::Scalar;

/// `m · C(n + k, k)`: the rank of `J^k` of a rank-`m` bundle over an
/// `n`-dimensional base, summing the symmetric powers `∨^i T*X`, `i ≤ k`.
pub fn jet_rank(nvars: usize, order: usize, rank: usize) -> usize {
    let mut c: u128 = 1;
    for i in 0..order as u128 {
        c = c * (nvars as u128 + i + 1) / (i + 1);
    }
    rank * c as usize
}

/// Coordinates of the jet bundle `J^k` of a rank-`m` trivial bundle.
///
/// Basis slots are `(α, i)` with `|α| ≤ k`, ordered by `|α|`, then
/// `x`-heavy derivatives first, then fiber index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpace {
    nvars: usize,
    rank: usize,
    order: usize,
    basis: Vec<(MultiIndex, usize)>,
}

impl JetSpace {
    pub fn new(nvars: usize, rank: usize, order: usize) -> Self {
        let basis = MultiIndex::up_to(nvars, order)
            .into_iter()
            .flat_map(|a| (0..rank).map(move |i| (a.clone(), i)))
            .collect();
        JetSpace {
            nvars,
            rank,
            order,
            basis,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Fiber rank `m` of the underlying bundle.
    pub fn fiber_rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of jet coordinates.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(MultiIndex, usize)] {
        &self.basis
    }

    pub fn slot(&self, alpha: &MultiIndex, fiber: usize) -> Option<usize> {
        if alpha.degree() > self.order || fiber >= self.rank {
            return None;
        }
        // Slots of lower degree come first, so a scan from the degree block
        // start would do; the basis is small enough for a linear search.
        self.basis.iter().position(|(a, i)| a == alpha && *i == fiber)
    }
}

/// An element of `J^k(P)` in jet coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVector<C> {
    space: JetSpace,
    coords: Vec<Polynomial<C>>,
}

impl<C: Scalar> JetVector<C> {
    pub fn new(space: JetSpace, coords: Vec<Polynomial<C>>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::RankMismatch {
                expected: space.dim(),
                found: coords.len(),
            });
        }
        for c in &coords {
            if c.nvars() != space.nvars {
                return Err(Error::DimensionMismatch {
                    expected: space.nvars,
                    found: c.nvars(),
                });
            }
        }
        Ok(JetVector { space, coords })
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn coords(&self) -> &[Polynomial<C>] {
        &self.coords
    }

    pub fn coord(&self, alpha: &MultiIndex, fiber: usize) -> Option<&Polynomial<C>> {
        self.space.slot(alpha, fiber).map(|s| &self.coords[s])
    }

    /// Truncation `π^k_r` to jets of order `r`.
    pub fn project(&self, r: usize) -> Result<Self> {
        if r > self.space.order {
            return Err(Error::JetOrder {
                requested: r,
                available: self.space.order,
            });
        }
        let space = JetSpace::new(self.space.nvars, self.space.rank, r);
        // Lower-order slots form a prefix of the basis.
        let coords = self.coords[..space.dim()].to_vec();
        Ok(JetVector { space, coords })
    }

    /// The 0-jet part as a section.
    pub fn base_section(&self) -> Section<C> {
        Section::new(self.space.nvars, self.coords[..self.space.rank].to_vec())
            .expect("coordinates share dimension")
    }
}

/// `J^k s`: all partial derivatives `∂^α s^i`, `|α| ≤ k`.
pub fn jet_prolong<C: Scalar>(order: usize, s: &Section<C>) -> JetVector<C> {
    let space = JetSpace::new(s.nvars(), s.rank(), order);
    let coords = space
        .basis()
        .iter()
        .map(|(a, i)| s.component(*i).derivative(a))
        .collect();
    JetVector { space, coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_poly, parse_section, Poly};

    /// Rank by brute enumeration of all exponent vectors in `[0, k]^n`.
    fn enumerate_rank(n: usize, k: usize, m: usize) -> usize {
        let mut count = 0;
        let total = (k + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut deg = 0;
            for _ in 0..n {
                deg += c % (k + 1);
                c /= k + 1;
            }
            if deg <= k {
                count += 1;
            }
        }
        m * count
    }

    #[test]
    fn rank_examples() {
        assert_eq!(jet_rank(2, 2, 1), 6);
        assert_eq!(jet_rank(1, 0, 1), 1);
        assert_eq!(jet_rank(3, 1, 2), 8);
        assert_eq!(enumerate_rank(2, 2, 1), 6);
        assert_eq!(enumerate_rank(3, 1, 2), 8);
    }

    #[test]
    fn rank_matches_enumeration_and_basis() {
        for n in 1..=4 {
            for k in 0..=4 {
                for m in 1..=3 {
                    let r = jet_rank(n, k, m);
                    assert_eq!(r, enumerate_rank(n, k, m));
                    assert_eq!(r, JetSpace::new(n, m, k).dim());
                    assert_eq!(r, m * jet_rank(n, k, 1));
                }
            }
        }
    }

    #[test]
    fn prolong_examples() {
        let s = Section::scalar(parse_poly("x^3", 1).unwrap());
        let j = jet_prolong(2, &s);
        let expect: Vec<Poly> = ["x^3", "3*x^2", "6*x"]
            .iter()
            .map(|t| parse_poly(t, 1).unwrap())
            .collect();
        assert_eq!(j.coords(), &expect[..]);
        assert_eq!(jet_prolong(0, &s).coords(), s.components());
        let c = Section::scalar(parse_poly("7/3", 2).unwrap());
        let jc = jet_prolong(3, &c);
        assert_eq!(jc.coords()[0], parse_poly("7/3", 2).unwrap());
        assert!(jc.coords()[1..].iter().all(Poly::is_zero));
    }

    #[test]
    fn projection() {
        let s = Section::scalar(parse_poly("x^3", 1).unwrap());
        let j = jet_prolong(2, &s);
        assert_eq!(j.project(1).unwrap(), jet_prolong(1, &s));
        assert_eq!(j.project(2).unwrap(), j);
        assert_eq!(jet_prolong(1, &s).project(0).unwrap().base_section(), s);
        assert!(matches!(j.project(3), Err(Error::JetOrder { .. })));
    }

    #[test]
    fn rank_m_prolongation_interleaves_components() {
        let s = parse_section("x*y^2, x^3 - y", 2).unwrap();
        let j = jet_prolong(2, &s);
        let j0 = jet_prolong(2, &Section::scalar(s.component(0).clone()));
        let j1 = jet_prolong(2, &Section::scalar(s.component(1).clone()));
        for (slot, c) in j.coords().iter().enumerate() {
            let (scalar_slot, fiber) = (slot / 2, slot % 2);
            let expected = if fiber == 0 { &j0 } else { &j1 }.coords()[scalar_slot].clone();
            assert_eq!(c, &expected);
        }
    }
}
