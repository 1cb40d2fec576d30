//! Contact orders: components of the inertia of a complex, their bands,
//! lifting along subdivisions and the degree formulas.
//!
//! A component is an orbit of lattice points; its band is the gcd of the
//! pairings of the point with the dual Hilbert basis of its minimal face
//! (0 for the zero point).

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::complex::{ComplexPoint, ConeComplex, ConeId};
use crate::cone::{Cone, Face};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, LinearChart};
use crate::par;
use crate::subdivision::{PLDivisor, SubdivisionMap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContactComponent {
    pub representative: ComplexPoint,
    pub band: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteData {
    pub genus: u32,
    pub markings: Vec<ContactComponent>,
    pub base_degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedData {
    pub genus: u32,
    pub markings: Vec<ContactComponent>,
    pub base_degree: i64,
    pub degree_l: i64,
    pub degree_total: i64,
}

/// The face of `sigma` containing `phi` in its relative interior.
pub fn vanishing_locus(sigma: &Cone, phi: &LatticeVector) -> Result<Face> {
    sigma.minimal_face(phi).cloned()
}

pub fn band_in_cone(sigma: &Cone, phi: &LatticeVector) -> Result<u64> {
    if phi.is_zero() {
        if !sigma.contains(phi)? {
            return Err(Error::NotContained(phi.coords().to_vec()));
        }
        return Ok(0);
    }
    let face = sigma.minimal_face(phi)?;
    let coords = face.cone.span_coords(phi)?.expect("a point of a face lies in its span");
    let mut g = 0u64;
    for xi in face.cone.dual_hilbert_basis()? {
        g = g.gcd(&xi.dot(&coords)?.unsigned_abs());
    }
    Ok(g)
}

pub fn band(x: &ConeComplex, p: &ComplexPoint) -> Result<u64> {
    band_in_cone(x.cone(p.cone)?, &p.point)
}

pub fn component(x: &ConeComplex, p: &ComplexPoint) -> Result<ContactComponent> {
    let representative = x.canonical(p)?;
    let band = band(x, &representative)?;
    Ok(ContactComponent { representative, band })
}

/// Components whose representatives have max-norm at most `bound`,
/// including the zero component.
pub fn contact_components(x: &ConeComplex, bound: u64) -> Result<Vec<ContactComponent>> {
    let points = x.points_up_to(bound)?;
    par::try_map(&points, |p| Ok(ContactComponent { representative: p.clone(), band: band(x, p)? }))
}

fn source_by_target(f: &SubdivisionMap) -> BTreeMap<ConeId, Vec<ConeId>> {
    let mut out: BTreeMap<ConeId, Vec<ConeId>> = BTreeMap::new();
    for (s, a) in f.assignment().iter().enumerate() {
        out.entry(a.target).or_default().push(s);
    }
    out
}

fn lift_point(f: &SubdivisionMap, index: &BTreeMap<ConeId, Vec<ConeId>>, p: &ComplexPoint) -> Result<ComplexPoint> {
    let x = f.target();
    let y = f.source();
    let mut found = BTreeSet::new();
    for q in x.orbit(p)? {
        for &s in index.get(&q.cone).map(Vec::as_slice).unwrap_or(&[]) {
            let cone = &y.cones()[s];
            let map = &f.assignment()[s].map;
            let images = cone.span_basis().iter().map(|b| map.apply(b)).collect::<Result<Vec<_>>>()?;
            let Ok(chart) = LinearChart::new(&images, x.cones()[q.cone].ambient_rank()) else { continue };
            let Some(c) = chart.integer_coords(&q.point)? else { continue };
            let u = cone.from_span_coords(&LatticeVector::new(c))?;
            if cone.contains(&u)? {
                found.insert(y.canonical(&ComplexPoint { cone: s, point: u })?);
            }
        }
    }
    let mut it = found.into_iter();
    match (it.next(), it.next()) {
        (Some(u), None) => Ok(u),
        (None, _) => Err(Error::NotASubdivision(format!("{p} has no preimage"))),
        (Some(_), Some(_)) => Err(Error::NotASubdivision(format!("{p} has several preimages"))),
    }
}

/// The source component over a target component.
pub fn lift_contact(f: &SubdivisionMap, c: &ContactComponent) -> Result<ContactComponent> {
    let index = source_by_target(f);
    let representative = lift_point(f, &index, &c.representative)?;
    let band = band(f.source(), &representative)?;
    Ok(ContactComponent { representative, band })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub target_components: usize,
    pub source_components: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.injective && self.surjective && self.target_components == self.source_components
    }
}

/// Lifts every target component of max-norm at most `bound` and matches
/// the result against the source components of the same bound, pushed
/// forward and canonicalized.
pub fn verify_bijection(f: &SubdivisionMap, bound: u64) -> Result<BijectionReport> {
    let x = f.target();
    let y = f.source();
    let index = source_by_target(f);
    let targets = x.points_up_to(bound)?;
    let lifts = par::try_map(&targets, |p| lift_point(f, &index, p))?;
    let lifted: BTreeSet<&ComplexPoint> = lifts.iter().collect();
    let injective = lifted.len() == lifts.len();
    let target_set: BTreeSet<&ComplexPoint> = targets.iter().collect();
    let sources = y.points_up_to(bound)?;
    let pushed = par::try_map(&sources, |q| x.canonical(&f.push_forward(q)?))?;
    let surjective = sources
        .iter()
        .zip(&pushed)
        .filter(|(_, t)| t.point.max_norm() <= bound)
        .all(|(q, t)| target_set.contains(t) && lifted.contains(q));
    Ok(BijectionReport {
        target_components: targets.len(),
        source_components: sources.len(),
        injective,
        surjective,
    })
}

/// Coefficient of ray orbit `ray` in the expansion of `phi` in the rays of
/// its minimal face.
pub fn contact_order_against_ray(y: &ConeComplex, phi: &ComplexPoint, ray: usize) -> Result<u64> {
    let cone = y.cone(phi.cone)?;
    let face = cone.minimal_face(&phi.point)?;
    if face.dim() == 0 {
        return Ok(0);
    }
    if !face.cone.is_smooth() {
        return Err(Error::NotSmooth(phi.cone));
    }
    let chart = LinearChart::new(face.cone.rays(), cone.ambient_rank())?;
    let coeffs = chart.integer_coords(&phi.point)?.expect("smooth face contains its lattice points");
    let mut total = 0u64;
    for (r, c) in face.cone.rays().iter().zip(coeffs) {
        if y.ray_orbit(phi.cone, r)? == ray {
            total += c.unsigned_abs();
        }
    }
    Ok(total)
}

/// `sum_i m_i sum_j c_j(E_i)`.
pub fn degree_l(f: &SubdivisionMap, m: &PLDivisor, contacts: &[ComplexPoint]) -> Result<i64> {
    let exc = f.exceptional_rays()?;
    for (&ray, &c) in &m.coefficients {
        if c != 0 && !exc.contains(&ray) {
            return Err(Error::UnsupportedCoefficient(ray));
        }
    }
    let y = f.source();
    let mut total: i64 = 0;
    for (&ray, &mi) in &m.coefficients {
        for phi in contacts {
            let c = i64::try_from(contact_order_against_ray(y, phi, ray)?).map_err(|_| Error::Overflow)?;
            total = mi.checked_mul(c).and_then(|t| total.checked_add(t)).ok_or(Error::Overflow)?;
        }
    }
    Ok(total)
}

pub fn degree_total(base_degree: i64, f: &SubdivisionMap, m: &PLDivisor, contacts: &[ComplexPoint]) -> Result<i64> {
    base_degree.checked_add(degree_l(f, m, contacts)?).ok_or(Error::Overflow)
}

/// Lifts each marking to the source and pins the degree of the lifted
/// line bundle.
pub fn lift_discrete_data(f: &SubdivisionMap, data: &DiscreteData, m: &PLDivisor) -> Result<LiftedData> {
    let markings = data.markings.iter().map(|c| lift_contact(f, c)).collect::<Result<Vec<_>>>()?;
    let points: Vec<ComplexPoint> = markings.iter().map(|c| c.representative.clone()).collect();
    let degree_l = degree_l(f, m, &points)?;
    Ok(LiftedData {
        genus: data.genus,
        markings,
        base_degree: data.base_degree,
        degree_l,
        degree_total: data.base_degree.checked_add(degree_l).ok_or(Error::Overflow)?,
    })
}
