//! JSON shapes for exchanging values. Rationals and polynomials travel as
//! literal strings (`"3/2"`, `"x^2 - 1/3*y"`) that re-parse to equal values.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, PointFunctional, RegularDensity};
use crate::error::{Error, Result};
use crate::jet::{JetHom, JetSpace, JetVector};
use crate::ring::MultiIndex;
use crate::testspace::{TestBox, TestSection};
use crate::{parse_poly, parse_rational, Rational, Sect};

/// One jet coordinate `∂^α s^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotDto {
    pub alpha: Vec<u32>,
    pub fiber: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetHomDto {
    pub basis: Vec<SlotDto>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetVectorDto {
    pub basis: Vec<SlotDto>,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestSectionDto {
    #[serde(rename = "box")]
    pub bx: Vec<[String; 2]>,
    pub p: u32,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDto {
    pub point: Vec<String>,
    pub alpha: Vec<u32>,
    #[serde(default)]
    pub fiber: usize,
    #[serde(default = "one")]
    pub coeff: String,
}

fn one() -> String {
    "1".into()
}

/// Density polynomials; with `embedded = p` they are the `q` of `w^p q`
/// over the session box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityDto {
    pub polys: Vec<String>,
    #[serde(default)]
    pub embedded: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionDto {
    #[serde(default)]
    pub points: Vec<PointDto>,
    #[serde(default)]
    pub density: Option<DensityDto>,
}

fn basis_dto(space: &JetSpace) -> Vec<SlotDto> {
    space
        .basis()
        .iter()
        .map(|(a, i)| SlotDto {
            alpha: a.exponents().to_vec(),
            fiber: *i,
        })
        .collect()
}

impl From<&JetHom<Rational>> for JetHomDto {
    fn from(h: &JetHom<Rational>) -> Self {
        let m = h.matrix();
        JetHomDto {
            basis: basis_dto(h.domain()),
            matrix: (0..m.rows())
                .map(|i| m.row_entries(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl From<&JetVector<Rational>> for JetVectorDto {
    fn from(j: &JetVector<Rational>) -> Self {
        JetVectorDto {
            basis: basis_dto(j.space()),
            coords: j.coords().iter().map(ToString::to_string).collect(),
        }
    }
}

impl From<&TestSection<Rational>> for TestSectionDto {
    fn from(t: &TestSection<Rational>) -> Self {
        let bx = t.test_box();
        TestSectionDto {
            bx: bx
                .lower()
                .iter()
                .zip(bx.upper())
                .map(|(l, r)| [l.to_string(), r.to_string()])
                .collect(),
            p: t.bump_exponent(),
            components: t.polynomial_part().components().iter().map(ToString::to_string).collect(),
        }
    }
}

impl TestSectionDto {
    pub fn decode(&self) -> Result<TestSection<Rational>> {
        let nvars = self.bx.len();
        let (lower, upper) = self
            .bx
            .iter()
            .map(|[l, r]| Ok((parse_rational(l)?, parse_rational(r)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        let bx = TestBox::new(lower, upper)?;
        TestSection::new(bx, self.p, decode_polys(&self.components, nvars)?)
    }
}

fn decode_polys(polys: &[String], nvars: usize) -> Result<Sect> {
    let components = polys.iter().map(|s| parse_poly(s, nvars)).collect::<Result<Vec<_>>>()?;
    Sect::new(nvars, components)
}

impl From<&Distribution<Rational>> for DistributionDto {
    fn from(d: &Distribution<Rational>) -> Self {
        DistributionDto {
            points: d
                .points()
                .iter()
                .map(|pf| PointDto {
                    point: pf.point.iter().map(ToString::to_string).collect(),
                    alpha: pf.alpha.exponents().to_vec(),
                    fiber: pf.fiber,
                    coeff: pf.coeff.to_string(),
                })
                .collect(),
            density: d.density().map(|den| DensityDto {
                polys: den.polys().components().iter().map(ToString::to_string).collect(),
                embedded: den.embedding().map(|(_, p)| p),
            }),
        }
    }
}

impl DistributionDto {
    /// Rank comes from `rank` if given, else from the density, else from the
    /// largest fiber index. Embedded densities use `bx`.
    pub fn decode(&self, bx: &TestBox<Rational>, rank: Option<usize>) -> Result<Distribution<Rational>> {
        let nvars = bx.nvars();
        let rank = rank
            .or_else(|| self.density.as_ref().map(|d| d.polys.len()))
            .or_else(|| self.points.iter().map(|p| p.fiber + 1).max())
            .unwrap_or(1);
        let points = self
            .points
            .iter()
            .map(|p| {
                Ok(PointFunctional {
                    point: p.point.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
                    alpha: MultiIndex::from_exponents(p.alpha.clone()),
                    fiber: p.fiber,
                    coeff: parse_rational(&p.coeff)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let density = self
            .density
            .as_ref()
            .map(|d| {
                let polys = decode_polys(&d.polys, nvars)?;
                Ok::<_, Error>(match d.embedded {
                    None => RegularDensity::plain(polys),
                    Some(p) => RegularDensity::embedded(&TestSection::new(bx.clone(), p, polys)?),
                })
            })
            .transpose()?;
        Distribution::new(nvars, rank, points, density)
    }
}
