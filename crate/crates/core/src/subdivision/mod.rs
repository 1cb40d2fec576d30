//! Subdivisions of cone complexes: star and barycentric subdivision, the
//! subdivision test, toric resolution and piecewise-linear ampleness.
//!
//! A [`SubdivisionMap`] `Y -> X` records, for every cone of `Y`, the cone of
//! `X` whose relative interior contains the image of its relative interior,
//! together with the lattice map between the two ambient lattices.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{box_points, ComplexPoint, ConeComplex, ConeId};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{IntegerMatrix, LatticeVector};
use crate::par;

mod pl;
mod resolve;
mod star;

pub use pl::{ample_coefficients, ample_coefficients_with_base, is_relatively_ample, pullback, PLDivisor};
pub use resolve::{multiplicity_trace, resolve, resolve_with, BarycentricPass, ResolveOptions};
pub use star::{barycentric, simplicialize, star_subdivide};

/// Where a source cone lands: the target cone and the map of ambient
/// lattices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub target: ConeId,
    pub map: IntegerMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Barycentric,
    Simplicial,
    Resolution,
    Manual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarStep {
    pub kind: StepKind,
    pub center: ComplexPoint,
    /// Charts of the subdivided complex to which the center lifts.
    pub affected_charts: Vec<ConeId>,
    /// Canonical generator of the new ray in the output, if the center did
    /// not already span a ray.
    pub new_ray: Option<ComplexPoint>,
    /// Multiplicities of the maximal simplicial cones after the step,
    /// largest first.
    pub multiplicities: Vec<u64>,
}

/// One star subdivision `complex -> previous`, with the assignment of each
/// cone of `complex` to a cone of the previous complex.
#[derive(Clone, Debug)]
pub struct Stage {
    pub step: StarStep,
    pub complex: Arc<ConeComplex>,
    pub parent: Vec<Assignment>,
}

#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    source: Arc<ConeComplex>,
    target: Arc<ConeComplex>,
    assignment: Vec<Assignment>,
    stages: Vec<Stage>,
}

impl SubdivisionMap {
    pub fn identity(x: &ConeComplex) -> SubdivisionMap {
        let x = Arc::new(x.clone());
        let assignment = x
            .cones()
            .iter()
            .enumerate()
            .map(|(i, c)| Assignment { target: i, map: IntegerMatrix::identity(c.ambient_rank()) })
            .collect();
        SubdivisionMap { source: x.clone(), target: x, assignment, stages: Vec::new() }
    }

    /// A map given directly by its cone assignment, with no history.
    pub fn from_assignment(source: ConeComplex, target: ConeComplex, assignment: Vec<Assignment>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::NotASubdivision(format!(
                "{} assignments for {} source cones",
                assignment.len(),
                source.len()
            )));
        }
        for (s, a) in assignment.iter().enumerate() {
            let t = target.cone(a.target)?;
            let c = source.cone(s)?;
            if a.map.rows() != t.ambient_rank() || a.map.cols() != c.ambient_rank() {
                return Err(Error::NotASubdivision(format!("assignment of cone {s} has the wrong shape")));
            }
        }
        Ok(SubdivisionMap { source: Arc::new(source), target: Arc::new(target), assignment, stages: Vec::new() })
    }

    /// Infers the assignment of an embedded source into an embedded target
    /// of the same ambient rank: each source cone goes to the target cone
    /// whose relative interior contains its barycenter.
    pub fn infer(source: ConeComplex, target: ConeComplex) -> Result<Self> {
        let assignment = par::try_map(source.cones(), |c| -> Result<Assignment> {
            let b = c.barycenter()?;
            for (t, tc) in target.cones().iter().enumerate() {
                if tc.ambient_rank() == c.ambient_rank() && tc.relint_contains(&b)? {
                    return Ok(Assignment { target: t, map: IntegerMatrix::identity(c.ambient_rank()) });
                }
            }
            Err(Error::NotASubdivision(format!("cone {:?} lies in no target cone", c.rays())))
        })?;
        Self::from_assignment(source, target, assignment)
    }

    pub fn source(&self) -> &ConeComplex {
        &self.source
    }

    pub fn target(&self) -> &ConeComplex {
        &self.target
    }

    pub fn assignment(&self) -> &[Assignment] {
        &self.assignment
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn history(&self) -> Vec<&StarStep> {
        self.stages.iter().map(|s| &s.step).collect()
    }

    /// Image of a source point in the target.
    pub fn push_forward(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        let a = self.assignment.get(p.cone).ok_or(Error::UnknownCone(p.cone))?;
        Ok(ComplexPoint { cone: a.target, point: a.map.apply(&p.point)? })
    }

    pub(crate) fn push_stage(&mut self, stage: Stage) -> Result<()> {
        let assignment = stage
            .parent
            .iter()
            .map(|p| {
                let a = &self.assignment[p.target];
                Ok(Assignment { target: a.target, map: a.map.checked_mul(&p.map)? })
            })
            .collect::<Result<Vec<_>>>()?;
        self.assignment = assignment;
        self.source = stage.complex.clone();
        self.stages.push(stage);
        Ok(())
    }

    /// The composite `g.source -> self.source -> self.target`. `g` must be a
    /// subdivision of this map's source.
    pub fn then(&self, g: &SubdivisionMap) -> Result<SubdivisionMap> {
        if g.target.canonical_form() != self.source.canonical_form() {
            return Err(Error::NotASubdivision("composed maps do not share a complex".into()));
        }
        let assignment = g
            .assignment
            .iter()
            .map(|p| {
                let a = &self.assignment[p.target];
                Ok(Assignment { target: a.target, map: a.map.checked_mul(&p.map)? })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut stages = self.stages.clone();
        stages.extend(g.stages.iter().cloned());
        Ok(SubdivisionMap { source: g.source.clone(), target: self.target.clone(), assignment, stages })
    }

    /// The same map with some source cones removed (and the history
    /// dropped). Mostly useful for producing non-subdivisions.
    pub fn without_source_cones(&self, ids: &[ConeId]) -> Result<SubdivisionMap> {
        let drop: BTreeSet<ConeId> = ids.iter().copied().collect();
        let source = self.source.remove_cones(ids)?;
        let assignment =
            self.assignment.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, a)| a.clone()).collect();
        Self::from_assignment(source, (*self.target).clone(), assignment)
    }

    /// Ray orbits of the source that are not sent onto rays of the target.
    pub fn exceptional_rays(&self) -> Result<Vec<usize>> {
        let rays = self.source.rays()?;
        let mut out = Vec::new();
        for (id, rep) in rays.orbits().iter().enumerate() {
            let t = self.assignment[rep.cone].target;
            if self.target.cone(t)?.dim() > 1 {
                out.push(id);
            }
        }
        Ok(out)
    }
}

/// Outcome of [`is_subdivision`]. On failure `witness` is a lattice point
/// of `target_cone` that is covered the wrong number of times, or a point
/// of an image cone that leaves the target cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionCheck {
    pub ok: bool,
    pub target_cone: Option<ConeId>,
    pub witness: Option<LatticeVector>,
    pub message: String,
}

impl SubdivisionCheck {
    fn pass() -> Self {
        SubdivisionCheck { ok: true, target_cone: None, witness: None, message: String::new() }
    }

    fn fail(cone: ConeId, witness: LatticeVector, message: String) -> Self {
        SubdivisionCheck { ok: false, target_cone: Some(cone), witness: Some(witness), message }
    }
}

pub const DEFAULT_CHECK_BOUND: u64 = 4;

pub fn is_subdivision(f: &SubdivisionMap) -> Result<SubdivisionCheck> {
    is_subdivision_up_to(f, DEFAULT_CHECK_BOUND)
}

/// Checks, for each target cone, that the images of the source cones lying
/// over it are contained in it, cover its lattice points of max-norm at
/// most `bound` exactly once by relative interiors, and meet along walls
/// like a fan whose support is the whole cone.
pub fn is_subdivision_up_to(f: &SubdivisionMap, bound: u64) -> Result<SubdivisionCheck> {
    let x = f.target();
    let y = f.source();
    let b = i64::try_from(bound).map_err(|_| Error::Overflow)?;
    let checks = par::try_map_range(x.len(), |sigma| check_chart(f, x, y, sigma, b))?;
    Ok(checks.into_iter().find(|c| !c.ok).unwrap_or_else(SubdivisionCheck::pass))
}

fn check_chart(f: &SubdivisionMap, x: &ConeComplex, y: &ConeComplex, sigma: ConeId, b: i64) -> Result<SubdivisionCheck> {
    let target = x.cone(sigma)?;
    let n = target.ambient_rank();
    let mut images: BTreeMap<Vec<LatticeVector>, Cone> = BTreeMap::new();
    for (s, a) in f.assignment().iter().enumerate() {
        let source = y.cone(s)?;
        for g in x.morphisms_into(sigma).filter(|g| g.source() == a.target) {
            let m = g.matrix().checked_mul(&a.map)?;
            let mut rays = Vec::with_capacity(source.rays().len());
            for r in source.rays() {
                let w = m.apply(r)?;
                if !target.contains(&w)? {
                    return Ok(SubdivisionCheck::fail(sigma, w, format!("image of source cone {s} leaves the cone")));
                }
                rays.push(w);
            }
            let image = Cone::new(n, &rays)?;
            if image.dim() != source.dim() {
                let w = LatticeVector::sum(n, &rays)?;
                return Ok(SubdivisionCheck::fail(sigma, w, format!("source cone {s} collapses")));
            }
            images.entry(image.rays().to_vec()).or_insert(image);
        }
    }
    let images: Vec<Cone> = images.into_values().collect();
    let target_test = Halfspaces::of(target)?;
    let image_tests = images.iter().map(Halfspaces::of).collect::<Result<Vec<_>>>()?;
    for v in box_points(n, b) {
        if !target_test.contains(&v)? {
            continue;
        }
        let mut count = 0;
        for t in &image_tests {
            if t.relint_contains(&v)? {
                count += 1;
            }
        }
        if count != 1 {
            return Ok(SubdivisionCheck::fail(sigma, v, format!("point covered {count} times")));
        }
    }
    let d = target.dim();
    if d == 0 {
        return Ok(SubdivisionCheck::pass());
    }
    let tops: Vec<&Cone> = images.iter().filter(|c| c.dim() == d).collect();
    if tops.is_empty() {
        return Ok(SubdivisionCheck::fail(sigma, target.barycenter()?, "no full-dimensional image".into()));
    }
    let mut walls: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
    for t in &tops {
        for w in t.faces().iter().filter(|w| w.dim() + 1 == d) {
            walls.insert(w.cone.rays().to_vec());
        }
    }
    for rays in walls {
        let p = LatticeVector::sum(n, &rays)?;
        let on_boundary = target.minimal_face(&p)?.dim() < d;
        let count = tops.iter().filter(|t| t.face_with_rays(&rays).is_some()).count();
        let expected = if on_boundary { 1 } else { 2 };
        if count != expected {
            return Ok(SubdivisionCheck::fail(sigma, p, format!("wall lies on {count} maximal cones, expected {expected}")));
        }
    }
    Ok(SubdivisionCheck::pass())
}

/// Integer description of a cone for fast repeated membership tests.
struct Halfspaces {
    eqs: Vec<LatticeVector>,
    normals: Vec<LatticeVector>,
}

impl Halfspaces {
    fn of(c: &Cone) -> Result<Self> {
        let (eqs, normals) = c.ambient_description()?;
        Ok(Halfspaces { eqs, normals })
    }

    fn in_span(&self, v: &LatticeVector) -> Result<bool> {
        for e in &self.eqs {
            if e.dot(v)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn contains(&self, v: &LatticeVector) -> Result<bool> {
        if !self.in_span(v)? {
            return Ok(false);
        }
        for a in &self.normals {
            if a.dot(v)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn relint_contains(&self, v: &LatticeVector) -> Result<bool> {
        if !self.in_span(v)? {
            return Ok(false);
        }
        for a in &self.normals {
            if a.dot(v)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Multiplicities of the maximal simplicial cones, largest first.
pub fn maximal_multiplicities(x: &ConeComplex) -> Vec<u64> {
    let mut out: Vec<u64> = x
        .maximal_cones()
        .into_iter()
        .filter_map(|id| x.cones()[id].multiplicity().ok())
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests;
