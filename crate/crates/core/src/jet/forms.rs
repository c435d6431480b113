use super::space::{JetSpace, JetVector};
use crate::error::{Error, Result};
use crate::ring::{MultiIndex, Polynomial, Section};
use crate::scalar::Scalar;

/// Element `Σ_μ ω_μ dx^μ` of the module of one-forms `O¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm<C> {
    components: Vec<Polynomial<C>>,
}

impl<C: Scalar> OneForm<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Self {
        OneForm { components }
    }

    pub fn zero(nvars: usize) -> Self {
        OneForm {
            components: vec![Polynomial::zero(nvars); nvars],
        }
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        OneForm {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul_poly(&self, f: &Polynomial<C>) -> Self {
        OneForm {
            components: self.components.iter().map(|c| f * c).collect(),
        }
    }

    /// Contraction `ω(u) = ω_μ u^μ` with a vector field.
    pub fn pair(&self, u: &[Polynomial<C>]) -> Result<Polynomial<C>> {
        if u.len() != self.components.len() {
            return Err(Error::RankMismatch {
                expected: self.components.len(),
                found: u.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(u)
            .fold(Polynomial::zero(u.first().map_or(0, Polynomial::nvars)), |acc, (w, v)| {
                &acc + &(w * v)
            }))
    }
}

/// The universal derivation `d¹ f = ∂_μ f dx^μ` into `O¹`.
pub fn d1<C: Scalar>(f: &Polynomial<C>) -> OneForm<C> {
    OneForm {
        components: (0..f.nvars())
            .map(|axis| f.derivative(&MultiIndex::unit(f.nvars(), axis)))
            .collect(),
    }
}

/// The two summands of `J¹(P) = P ⊕ (O¹ ⊗ P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitJet<C> {
    pub section: Section<C>,
    /// One form per fiber component.
    pub forms: Vec<OneForm<C>>,
}

/// Splits a first-order jet into its section part and its `O¹ ⊗ P` part;
/// on a prolongation `J¹ s` this is `(s, d¹ s^i)`.
pub fn split_j1<C: Scalar>(j: &JetVector<C>) -> Result<SplitJet<C>> {
    let space = j.space();
    if space.order() != 1 {
        return Err(Error::JetOrder {
            requested: 1,
            available: space.order(),
        });
    }
    let n = space.nvars();
    let forms = (0..space.fiber_rank())
        .map(|i| {
            OneForm::new(
                (0..n)
                    .map(|mu| {
                        j.coord(&MultiIndex::unit(n, mu), i)
                            .expect("first-order slot")
                            .clone()
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(SplitJet {
        section: j.base_section(),
        forms,
    })
}

/// Inverse of [`split_j1`].
pub fn reassemble_j1<C: Scalar>(split: &SplitJet<C>) -> Result<JetVector<C>> {
    let s = &split.section;
    if split.forms.len() != s.rank() {
        return Err(Error::RankMismatch {
            expected: s.rank(),
            found: split.forms.len(),
        });
    }
    let space = JetSpace::new(s.nvars(), s.rank(), 1);
    let coords = space
        .basis()
        .iter()
        .map(|(a, i)| match a.exponents().iter().position(|&e| e == 1) {
            None => s.component(*i).clone(),
            Some(mu) => split.forms[*i].components()[mu].clone(),
        })
        .collect();
    JetVector::new(space, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::jet_prolong;
    use crate::{parse_poly, parse_section, Poly};

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn d1_examples() {
        assert_eq!(d1(&p("x^2", 1)).components(), &[p("2*x", 1)]);
        assert!(d1(&p("1", 2)).is_zero());
        assert_eq!(d1(&p("x*y", 2)).components(), &[p("y", 2), p("x", 2)]);
    }

    #[test]
    fn d1_leibniz() {
        let a = p("x^2*y - y", 2);
        let b = p("x + y^3", 2);
        let lhs = d1(&(&a * &b));
        let rhs = d1(&b).mul_poly(&a).add(&d1(&a).mul_poly(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_examples() {
        let s = Section::scalar(p("x^2", 1));
        let sp = split_j1(&jet_prolong(1, &s)).unwrap();
        assert_eq!(sp.section, s);
        assert_eq!(sp.forms, vec![OneForm::new(vec![p("2*x", 1)])]);

        let c = Section::scalar(p("5", 2));
        let sp = split_j1(&jet_prolong(1, &c)).unwrap();
        assert_eq!(sp.section, c);
        assert!(sp.forms[0].is_zero());

        let s = parse_section("x*y, y^2 - x", 2).unwrap();
        let j = jet_prolong(1, &s);
        let sp = split_j1(&j).unwrap();
        assert_eq!(sp.forms[1], d1(s.component(1)));
        assert_eq!(reassemble_j1(&sp).unwrap(), j);

        assert!(split_j1(&jet_prolong(2, &s)).is_err());
    }
}
