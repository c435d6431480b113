use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{binomial, Scalar};

/// Exponent vector of a monomial `x^α` or a derivative `∂^α`.
///
/// Ordered graded-lexicographically: total degree first, then by the
/// exponent of `x`, `y`, ... so that `x > y > 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Unit index `e_axis`.
    pub fn unit(nvars: usize, axis: usize) -> Self {
        let mut e = vec![0; nvars];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// |α|
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.nvars(), other.nvars());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` unless `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn with_incremented(&self, axis: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[axis] += 1;
        MultiIndex(e)
    }

    /// All `γ ≤ self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.nvars())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=e).map(move |g| {
                        let mut p = prefix.clone();
                        p.push(g);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Multi-binomial `(self choose γ) = Π C(self_i, γ_i)`.
    pub fn binomial<C: Scalar>(&self, gamma: &MultiIndex) -> C {
        self.0
            .iter()
            .zip(&gamma.0)
            .fold(C::one(), |acc, (&a, &g)| acc * binomial::<C>(a, g))
    }

    /// Indices with `|α| = degree`, largest (in graded-lex order) first.
    pub fn of_degree(nvars: usize, degree: usize) -> Vec<MultiIndex> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(nvars, degree as u32, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// Jet ordering of all indices with `|α| ≤ max_degree`: by degree
    /// ascending, and within one degree `x`-heavy indices first.
    pub fn up_to(nvars: usize, max_degree: usize) -> Vec<MultiIndex> {
        (0..=max_degree)
            .flat_map(|d| MultiIndex::of_degree(nvars, d))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_exponents(e.to_vec())
    }

    #[test]
    fn graded_lex() {
        assert!(mi(&[1, 0]) > mi(&[0, 1]));
        assert!(mi(&[0, 2]) > mi(&[1, 0]));
        assert!(mi(&[2, 0]) > mi(&[1, 1]));
        assert!(mi(&[0, 0]) < mi(&[0, 1]));
    }

    #[test]
    fn jet_order() {
        let all = MultiIndex::up_to(2, 2);
        let got: Vec<Vec<u32>> = all.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn sub_indices_count() {
        assert_eq!(mi(&[2, 1]).sub_indices().len(), 6);
        assert_eq!(mi(&[0, 0, 0]).sub_indices().len(), 1);
    }

    #[test]
    fn multi_binomial() {
        let c: f64 = mi(&[3, 2]).binomial(&mi(&[1, 1]));
        assert_eq!(c, 6.0);
    }
}
