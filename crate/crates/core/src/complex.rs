//! Generalized cone complexes: cones glued along face maps, possibly with
//! self-gluing (monodromy).
//!
//! A complex is a diagram. Its objects are [`Cone`]s, each with its own
//! ambient lattice, and its arrows are [`FaceMap`]s identifying a cone with a
//! face of another cone. The composition closure of the arrows (identities
//! included) is computed once at construction; everything else (orbits of
//! lattice points, stability, ray orbits) is read off that closure.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{abs_determinant, IntegerMatrix, LatticeVector, LinearChart};
use crate::par;

pub type ConeId = usize;

pub const DEFAULT_MORPHISM_CAP: usize = 1_000_000;

static MORPHISM_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_MORPHISM_CAP);

/// Overrides the cap on the number of morphisms generated by the groupoid
/// closure.
pub fn set_morphism_cap(cap: usize) {
    MORPHISM_CAP.store(cap, Ordering::Relaxed);
}

pub fn morphism_cap() -> usize {
    MORPHISM_CAP.load(Ordering::Relaxed)
}

/// A lattice point of one cone of a complex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub cone: ConeId,
    pub point: LatticeVector,
}

impl ComplexPoint {
    pub fn new(cone: ConeId, point: impl Into<LatticeVector>) -> Self {
        ComplexPoint { cone, point: point.into() }
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.point, self.cone)
    }
}

/// Lattice map from the ambient lattice of `source` to that of `target`
/// (`map` has `target` ambient rank rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMap {
    pub source: ConeId,
    pub target: ConeId,
    pub map: IntegerMatrix,
}

/// An arrow of the composition closure.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: ConeId,
    target: ConeId,
    map: IntegerMatrix,
    image_rays: Vec<LatticeVector>,
    key: Vec<LatticeVector>,
    chart: Option<LinearChart>,
}

impl Morphism {
    pub fn source(&self) -> ConeId {
        self.source
    }

    pub fn target(&self) -> ConeId {
        self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.map
    }

    /// Primitive images of the source rays, sorted.
    pub fn image_rays(&self) -> &[LatticeVector] {
        &self.image_rays
    }

    /// True when the map fixes the source span pointwise (as for the
    /// inclusions of an embedded fan).
    pub fn is_inclusion(&self, cones: &[Cone]) -> bool {
        self.key.as_slice() == cones[self.source].span_basis()
    }

    /// Preimage of a target point in the source cone, if it has one.
    pub fn preimage(&self, source: &Cone, w: &LatticeVector) -> Result<Option<LatticeVector>> {
        let Some(chart) = &self.chart else { return Ok(None) };
        match chart.integer_coords(w)? {
            None => Ok(None),
            Some(c) => {
                let u = source.from_span_coords(&LatticeVector::new(c))?;
                Ok(source.contains(&u)?.then_some(u))
            }
        }
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.map.apply(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    NotInjective,
    ImageNotAFace,
    LatticeMismatch,
    FaceIncomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Orbits of one-dimensional cones, indexed by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet {
    orbits: Vec<ComplexPoint>,
    index: BTreeMap<ComplexPoint, usize>,
}

impl RaySet {
    /// Canonical representative (primitive generator) of each ray orbit.
    pub fn orbits(&self) -> &[ComplexPoint] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn id_of(&self, canonical: &ComplexPoint) -> Option<usize> {
        self.index.get(canonical).copied()
    }
}

/// For each cone, the ray-orbit label of each of its rays (in ray order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryLabeling {
    pub labels: Vec<Vec<usize>>,
    pub rays: RaySet,
}

#[derive(Clone)]
pub struct ConeComplex {
    cones: Vec<Cone>,
    generators: Vec<FaceMap>,
    morphisms: Vec<Morphism>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    rays: OnceLock<RaySet>,
}

impl fmt::Debug for ConeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeComplex")
            .field("cones", &self.cones)
            .field("generators", &self.generators.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

type MorphismKey = (ConeId, ConeId, Vec<LatticeVector>);

impl ConeComplex {
    /// Builds a complex from cones and generating face maps. Identities are
    /// added and the composition closure is computed; the maps themselves
    /// are checked by [`ConeComplex::validate`].
    pub fn from_diagram(cones: Vec<Cone>, maps: Vec<FaceMap>) -> Result<ConeComplex> {
        Self::from_diagram_capped(cones, maps, morphism_cap())
    }

    /// As [`ConeComplex::from_diagram`] with an explicit closure cap.
    pub fn from_diagram_capped(cones: Vec<Cone>, maps: Vec<FaceMap>, cap: usize) -> Result<ConeComplex> {
        for m in &maps {
            for id in [m.source, m.target] {
                if id >= cones.len() {
                    return Err(Error::UnknownCone(id));
                }
            }
            let (rows, cols) = (cones[m.target].ambient_rank(), cones[m.source].ambient_rank());
            if m.map.rows() != rows || m.map.cols() != cols {
                return Err(Error::InvalidComplex(format!(
                    "face map {} -> {} has shape {}x{}, expected {rows}x{cols}",
                    m.source,
                    m.target,
                    m.map.rows(),
                    m.map.cols()
                )));
            }
        }
        let generators: Vec<FaceMap> = maps
            .into_iter()
            .filter(|m| !(m.source == m.target && m.map.is_identity()))
            .collect();
        let mut complex = ConeComplex {
            into: vec![Vec::new(); cones.len()],
            out_of: vec![Vec::new(); cones.len()],
            cones,
            generators,
            morphisms: Vec::new(),
            rays: OnceLock::new(),
        };
        complex.close(cap)?;
        Ok(complex)
    }

    fn make_morphism(&self, source: ConeId, target: ConeId, map: IntegerMatrix) -> Result<Morphism> {
        let s = &self.cones[source];
        let key = s.span_basis().iter().map(|b| map.apply(b)).collect::<Result<Vec<_>>>()?;
        let mut image_rays = Vec::with_capacity(s.rays().len());
        for r in s.rays() {
            let w = map.apply(r)?;
            image_rays.push(if w.is_zero() { w } else { w.primitive()? });
        }
        image_rays.sort();
        let chart = LinearChart::new(&key, self.cones[target].ambient_rank()).ok();
        Ok(Morphism { source, target, map, image_rays, key, chart })
    }

    fn close(&mut self, cap: usize) -> Result<()> {
        let mut seen: HashMap<MorphismKey, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut initial: Vec<(ConeId, ConeId, IntegerMatrix)> = (0..self.cones.len())
            .map(|i| (i, i, IntegerMatrix::identity(self.cones[i].ambient_rank())))
            .collect();
        initial.extend(self.generators.iter().map(|g| (g.source, g.target, g.map.clone())));
        for (s, t, m) in initial {
            self.push_morphism(s, t, m, &mut seen, &mut queue, cap)?;
        }
        while let Some(i) = queue.pop_front() {
            let (s, t) = (self.morphisms[i].source, self.morphisms[i].target);
            let f = self.morphisms[i].map.clone();
            let after: Vec<usize> = self.out_of[t].clone();
            for g in after {
                let comp = self.morphisms[g].map.checked_mul(&f)?;
                let u = self.morphisms[g].target;
                self.push_morphism(s, u, comp, &mut seen, &mut queue, cap)?;
            }
            let before: Vec<usize> = self.into[s].clone();
            for h in before {
                let comp = f.checked_mul(&self.morphisms[h].map)?;
                let r = self.morphisms[h].source;
                self.push_morphism(r, t, comp, &mut seen, &mut queue, cap)?;
            }
        }
        Ok(())
    }

    fn push_morphism(
        &mut self,
        s: ConeId,
        t: ConeId,
        map: IntegerMatrix,
        seen: &mut HashMap<MorphismKey, usize>,
        queue: &mut VecDeque<usize>,
        cap: usize,
    ) -> Result<()> {
        let m = self.make_morphism(s, t, map)?;
        let key = (s, t, m.key.clone());
        if seen.contains_key(&key) {
            return Ok(());
        }
        if self.morphisms.len() >= cap {
            return Err(Error::GroupoidBlowup(cap));
        }
        let idx = self.morphisms.len();
        seen.insert(key, idx);
        self.morphisms.push(m);
        self.into[t].push(idx);
        self.out_of[s].push(idx);
        queue.push_back(idx);
        Ok(())
    }

    /// Embedded fan: every face of every listed cone becomes a cone of the
    /// complex, glued by inclusions. Fails with `NotAFan` if two listed cones
    /// meet in something other than a common face.
    pub fn from_fan(ambient_rank: usize, maximal_cones: &[Vec<LatticeVector>]) -> Result<ConeComplex> {
        let listed = maximal_cones.iter().map(|rays| Cone::new(ambient_rank, rays)).collect::<Result<Vec<_>>>()?;
        for i in 0..listed.len() {
            for j in i + 1..listed.len() {
                let (a, b) = (&listed[i], &listed[j]);
                let meet = a.intersection(b)?;
                if a.face_with_rays(meet.rays()).is_none() || b.face_with_rays(meet.rays()).is_none() {
                    return Err(Error::NotAFan(format!(
                        "cones {:?} and {:?} meet in {:?}, which is not a face of both",
                        a.rays(),
                        b.rays(),
                        meet.rays()
                    )));
                }
            }
        }
        let mut all: BTreeMap<(usize, Vec<LatticeVector>), Cone> = BTreeMap::new();
        for c in &listed {
            for f in c.faces() {
                all.entry((f.dim(), f.cone.rays().to_vec())).or_insert_with(|| f.cone.clone());
            }
        }
        let index: BTreeMap<Vec<LatticeVector>, ConeId> =
            all.keys().enumerate().map(|(i, (_, rays))| (rays.clone(), i)).collect();
        let cones: Vec<Cone> = all.into_values().collect();
        let mut maps = Vec::new();
        for (t, c) in cones.iter().enumerate() {
            for f in c.faces() {
                let s = index[f.cone.rays()];
                if s != t {
                    maps.push(FaceMap { source: s, target: t, map: IntegerMatrix::identity(ambient_rank) });
                }
            }
        }
        ConeComplex::from_diagram(cones, maps)
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> Result<&Cone> {
        self.cones.get(id).ok_or(Error::UnknownCone(id))
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// The generating (non-identity) face maps.
    pub fn generators(&self) -> &[FaceMap] {
        &self.generators
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphisms_into(&self, t: ConeId) -> impl Iterator<Item = &Morphism> {
        self.into[t].iter().map(move |&i| &self.morphisms[i])
    }

    pub fn morphisms_out_of(&self, s: ConeId) -> impl Iterator<Item = &Morphism> {
        self.out_of[s].iter().map(move |&i| &self.morphisms[i])
    }

    pub fn cone_by_rays(&self, rays: &[LatticeVector]) -> Option<ConeId> {
        let mut sorted = rays.to_vec();
        sorted.sort();
        self.cones.iter().position(|c| c.rays() == sorted.as_slice())
    }

    /// Cones that are not a proper face of another cone.
    pub fn maximal_cones(&self) -> Vec<ConeId> {
        (0..self.cones.len())
            .filter(|&c| self.morphisms_out_of(c).all(|m| self.cones[m.target].dim() == self.cones[c].dim()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    /// An embedded fan: one ambient lattice, all maps inclusions, distinct
    /// cones have distinct rays.
    pub fn is_embedded(&self) -> bool {
        let Some(first) = self.cones.first() else { return true };
        let rank = first.ambient_rank();
        self.cones.iter().all(|c| c.ambient_rank() == rank)
            && self.morphisms.iter().all(|m| m.is_inclusion(&self.cones))
            && self.cones.iter().map(|c| c.rays()).collect::<BTreeSet<_>>().len() == self.cones.len()
    }

    /// No cone has a nontrivial automorphism in the closure.
    pub fn is_faithful(&self) -> bool {
        self.morphisms
            .iter()
            .all(|m| m.source != m.target || m.key.as_slice() == self.cones[m.source].span_basis())
    }

    /// Every face of every cone is the image of exactly one closure
    /// morphism. Such complexes have no monodromy, and every vector is
    /// stable.
    pub fn is_monodromy_free(&self) -> bool {
        (0..self.cones.len()).all(|t| {
            let images: Vec<&[LatticeVector]> = self.morphisms_into(t).map(|m| m.image_rays()).collect();
            images.iter().collect::<BTreeSet<_>>().len() == images.len()
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut diagnostics = Vec::new();
        for g in &self.generators {
            if let Err(d) = self.check_face_map(g) {
                diagnostics.push(d);
            }
        }
        for (t, c) in self.cones.iter().enumerate() {
            for f in c.faces() {
                if !self.morphisms_into(t).any(|m| m.image_rays() == f.cone.rays()) {
                    diagnostics.push(Diagnostic {
                        kind: DiagnosticKind::FaceIncomplete,
                        message: format!("face {:?} of cone {t} is not the image of any face map", f.cone.rays()),
                    });
                }
            }
        }
        ValidationReport { diagnostics }
    }

    fn check_face_map(&self, g: &FaceMap) -> std::result::Result<(), Diagnostic> {
        let err = |kind, message: String| Diagnostic { kind, message };
        let here = format!("face map {} -> {}", g.source, g.target);
        let m = self
            .make_morphism(g.source, g.target, g.map.clone())
            .map_err(|e| err(DiagnosticKind::NotInjective, format!("{here}: {e}")))?;
        let (s, t) = (&self.cones[g.source], &self.cones[g.target]);
        if m.chart.is_none() || m.image_rays.iter().any(LatticeVector::is_zero) {
            return Err(err(DiagnosticKind::NotInjective, format!("{here} is not injective on the source span")));
        }
        let face = t.face_with_rays(&m.image_rays).ok_or_else(|| {
            err(DiagnosticKind::ImageNotAFace, format!("{here}: image rays {:?} are not a face of the target", m.image_rays))
        })?;
        for r in s.rays() {
            let w = g.map.apply(r).map_err(|e| err(DiagnosticKind::LatticeMismatch, e.to_string()))?;
            if w.content() != 1 {
                return Err(err(DiagnosticKind::LatticeMismatch, format!("{here} sends ray {r} to non-primitive {w}")));
            }
        }
        let coords = m
            .key
            .iter()
            .map(|w| face.cone.span_coords(w).ok().flatten())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| err(DiagnosticKind::LatticeMismatch, format!("{here}: image leaves the face lattice")))?;
        let d = face.cone.dim();
        let det = IntegerMatrix::from_vectors(&coords, d).and_then(|mat| abs_determinant(&mat));
        if coords.len() != d || det != Ok(1) {
            return Err(err(
                DiagnosticKind::LatticeMismatch,
                format!("{here} is not a lattice isomorphism onto its image face"),
            ));
        }
        Ok(())
    }

    fn check_point(&self, p: &ComplexPoint) -> Result<()> {
        let c = self.cone(p.cone)?;
        if !c.contains(&p.point)? {
            return Err(Error::NotContained(p.point.coords().to_vec()));
        }
        Ok(())
    }

    /// All points related to `p` by chains of face maps and their inverses.
    pub fn orbit(&self, p: &ComplexPoint) -> Result<BTreeSet<ComplexPoint>> {
        self.check_point(p)?;
        let mut seen = BTreeSet::new();
        seen.insert(p.clone());
        let mut stack = vec![p.clone()];
        while let Some(q) = stack.pop() {
            for m in self.morphisms_out_of(q.cone) {
                let next = ComplexPoint { cone: m.target, point: m.apply(&q.point)? };
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
            for m in self.morphisms_into(q.cone) {
                if let Some(u) = m.preimage(&self.cones[m.source], &q.point)? {
                    let next = ComplexPoint { cone: m.source, point: u };
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Lexicographically least `(cone id, coordinates)` in the orbit.
    pub fn canonical(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        Ok(self.orbit(p)?.into_iter().next().expect("orbit contains its seed"))
    }

    /// The lift of `x` to each cone, or an error if some cone receives two.
    pub fn lifts(&self, x: &ComplexPoint) -> Result<Vec<Option<LatticeVector>>> {
        let mut out = vec![None; self.cones.len()];
        for q in self.orbit(x)? {
            if out[q.cone].replace(q.point).is_some() {
                return Err(Error::UnstableCenter(x.clone()));
            }
        }
        Ok(out)
    }

    pub fn is_stable_vector(&self, x: &ComplexPoint) -> Result<bool> {
        if x.point.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut cones = BTreeSet::new();
        Ok(self.orbit(x)?.into_iter().all(|q| cones.insert(q.cone)))
    }

    /// One canonical representative per orbit of lattice points with
    /// max-norm at most `bound`, sorted.
    pub fn points_up_to(&self, bound: u64) -> Result<Vec<ComplexPoint>> {
        if bound == 0 {
            return Err(Error::ZeroBound);
        }
        let b = i64::try_from(bound).map_err(|_| Error::Overflow)?;
        let per_cone = par::try_map_range(self.cones.len(), |id| -> Result<BTreeSet<ComplexPoint>> {
            let c = &self.cones[id];
            let mut reps = BTreeSet::new();
            for v in box_points(c.ambient_rank(), b) {
                if c.relint_contains(&v)? {
                    reps.insert(self.canonical(&ComplexPoint { cone: id, point: v })?);
                }
            }
            Ok(reps)
        })?;
        let mut all = BTreeSet::new();
        for s in per_cone {
            all.extend(s);
        }
        Ok(all.into_iter().collect())
    }

    /// Orbits of one-dimensional cones (the set S of strict maps from the
    /// ray), each represented by its canonical primitive generator.
    pub fn rays(&self) -> Result<&RaySet> {
        if let Some(r) = self.rays.get() {
            return Ok(r);
        }
        let mut orbits = BTreeSet::new();
        for (id, c) in self.cones.iter().enumerate() {
            if c.dim() == 1 {
                orbits.insert(self.canonical(&ComplexPoint { cone: id, point: c.rays()[0].clone() })?);
            }
        }
        let orbits: Vec<ComplexPoint> = orbits.into_iter().collect();
        let index = orbits.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(self.rays.get_or_init(|| RaySet { orbits, index }))
    }

    /// Ray-orbit id of a ray of the given cone.
    pub fn ray_orbit(&self, cone: ConeId, ray: &LatticeVector) -> Result<usize> {
        let canon = self.canonical(&ComplexPoint { cone, point: ray.clone() })?;
        self.rays()?
            .id_of(&canon)
            .ok_or_else(|| Error::InvalidComplex(format!("{ray} is not a ray generator of cone {cone}")))
    }

    /// Labels every cone by the ray orbits of its rays and checks that
    /// distinct rays of one cone carry distinct labels, which makes the
    /// induced map to the product of copies of the ray strict.
    pub fn boundary_map(&self) -> Result<BoundaryLabeling> {
        for (id, c) in self.cones.iter().enumerate() {
            if !c.is_smooth() && c.dim() > 0 {
                return Err(Error::NotSmooth(id));
            }
        }
        for (id, c) in self.cones.iter().enumerate() {
            if c.dim() == 1 {
                let p = ComplexPoint { cone: id, point: c.rays()[0].clone() };
                if !self.is_stable_vector(&p)? {
                    return Err(Error::UnstableRay(p));
                }
            }
        }
        let rays = self.rays()?.clone();
        let mut labels = Vec::with_capacity(self.cones.len());
        for (id, c) in self.cones.iter().enumerate() {
            let l = c.rays().iter().map(|r| self.ray_orbit(id, r)).collect::<Result<Vec<_>>>()?;
            if l.iter().collect::<BTreeSet<_>>().len() != l.len() {
                return Err(Error::UnstableRay(ComplexPoint { cone: id, point: c.rays()[0].clone() }));
            }
            labels.push(l);
        }
        Ok(BoundaryLabeling { labels, rays })
    }

    /// Drops the listed cones and every face map touching them.
    pub fn remove_cones(&self, ids: &[ConeId]) -> Result<ConeComplex> {
        let drop: BTreeSet<ConeId> = ids.iter().copied().collect();
        let mut renumber = vec![None; self.cones.len()];
        let mut cones = Vec::new();
        for (i, c) in self.cones.iter().enumerate() {
            if !drop.contains(&i) {
                renumber[i] = Some(cones.len());
                cones.push(c.clone());
            }
        }
        let maps = self
            .generators
            .iter()
            .filter_map(|g| {
                Some(FaceMap { source: renumber[g.source]?, target: renumber[g.target]?, map: g.map.clone() })
            })
            .collect();
        ConeComplex::from_diagram(cones, maps)
    }

    /// Cones (ambient rank and rays) and the closure as a set of keyed
    /// arrows; equal canonical forms mean isomorphic diagrams with the same
    /// numbering.
    pub fn canonical_form(&self) -> (Vec<(usize, Vec<LatticeVector>)>, BTreeSet<MorphismKey>) {
        let cones = self.cones.iter().map(|c| (c.ambient_rank(), c.rays().to_vec())).collect();
        let arrows = self.morphisms.iter().map(|m| (m.source, m.target, m.key.clone())).collect();
        (cones, arrows)
    }
}

/// Lattice points of `[-b, b]^n`, in lexicographic order.
pub(crate) fn box_points(n: usize, b: i64) -> impl Iterator<Item = LatticeVector> {
    let side = (2 * b + 1) as u64;
    let total = side.checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut k| {
        let mut coords = vec![0i64; n];
        for c in coords.iter_mut().rev() {
            *c = (k % side) as i64 - b;
            k /= side;
        }
        LatticeVector::new(coords)
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from(c)
    }

    pub(crate) fn fan(rank: usize, cones: &[&[&[i64]]]) -> ConeComplex {
        let cones: Vec<Vec<LatticeVector>> = cones.iter().map(|c| c.iter().map(|r| v(r)).collect()).collect();
        ConeComplex::from_fan(rank, &cones).unwrap()
    }

    pub(crate) fn quadrant() -> ConeComplex {
        fan(2, &[&[&[1, 0], &[0, 1]]])
    }

    /// The quadrant with its two rays exchanged by an automorphism.
    pub(crate) fn swap_quadrant() -> ConeComplex {
        let q = quadrant();
        let top = q.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let mut maps = q.generators().to_vec();
        maps.push(FaceMap { source: top, target: top, map: IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2).unwrap() });
        ConeComplex::from_diagram(q.cones().to_vec(), maps).unwrap()
    }

    #[test]
    fn from_fan_examples() {
        let q = quadrant();
        assert_eq!(q.len(), 4);
        assert!(q.validate().is_valid());
        assert!(q.is_faithful() && q.is_embedded() && q.is_monodromy_free());

        let blowup = fan(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]);
        assert_eq!(blowup.len(), 6);
        assert_eq!(blowup.cones().iter().filter(|c| c.rays() == [v(&[1, 1])]).count(), 1);

        let half = fan(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]]]);
        assert_eq!(half.len(), 6);
        assert!(half.validate().is_valid());
    }

    #[test]
    fn overlapping_cones_are_not_a_fan() {
        let cones = vec![vec![v(&[1, 0]), v(&[1, 2])], vec![v(&[1, 1]), v(&[0, 1])]];
        assert!(matches!(ConeComplex::from_fan(2, &cones), Err(Error::NotAFan(_))));
    }

    #[test]
    fn swap_is_valid_but_not_faithful() {
        let s = swap_quadrant();
        assert!(s.validate().is_valid());
        assert!(!s.is_faithful());
        assert!(!s.is_monodromy_free());
    }

    #[test]
    fn missing_ray_is_face_incomplete() {
        let q = quadrant();
        let ray = q.cone_by_rays(&[v(&[1, 0])]).unwrap();
        let broken = q.remove_cones(&[ray]).unwrap();
        let report = broken.validate();
        assert!(!report.is_valid());
        assert!(report.diagnostics.iter().all(|d| d.kind == DiagnosticKind::FaceIncomplete));
    }

    #[test]
    fn bad_face_maps_are_diagnosed() {
        let q = quadrant();
        let top = q.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let ray = q.cone_by_rays(&[v(&[1, 0])]).unwrap();
        let mut maps = q.generators().to_vec();
        // doubling map: image is a face but not lattice-isomorphic
        maps.push(FaceMap { source: ray, target: top, map: IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 2]], 2).unwrap() });
        let c = ConeComplex::from_diagram(q.cones().to_vec(), maps).unwrap();
        assert!(c.validate().diagnostics.iter().any(|d| d.kind == DiagnosticKind::LatticeMismatch));
    }

    #[test]
    fn points_up_to_examples() {
        let pts = quadrant().points_up_to(1).unwrap();
        let coords: BTreeSet<LatticeVector> = pts.iter().map(|p| p.point.clone()).collect();
        assert_eq!(coords, [v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])].into_iter().collect());
        assert_eq!(swap_quadrant().points_up_to(1).unwrap().len(), 3);
        assert_eq!(quadrant().points_up_to(0), Err(Error::ZeroBound));
    }

    #[test]
    fn points_are_prefix_consistent() {
        let c = swap_quadrant();
        let small = c.points_up_to(2).unwrap();
        let large: BTreeSet<ComplexPoint> = c.points_up_to(4).unwrap().into_iter().collect();
        assert!(small.iter().all(|p| large.contains(p)));
    }

    #[test]
    fn stability_examples() {
        let q = quadrant();
        let top = q.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(q.is_stable_vector(&ComplexPoint::new(top, [1, 2])).unwrap());
        let s = swap_quadrant();
        assert!(!s.is_stable_vector(&ComplexPoint::new(top, [1, 2])).unwrap());
        assert!(s.is_stable_vector(&ComplexPoint::new(top, [1, 1])).unwrap());
        assert_eq!(s.is_stable_vector(&ComplexPoint::new(top, [0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn every_point_of_an_embedded_fan_is_stable() {
        let blowup = fan(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]);
        for p in blowup.points_up_to(3).unwrap() {
            if !p.point.is_zero() {
                assert!(blowup.is_stable_vector(&p).unwrap());
            }
        }
    }

    #[test]
    fn rays_and_boundary_map() {
        let q = quadrant();
        assert_eq!(q.rays().unwrap().len(), 2);
        let lab = q.boundary_map().unwrap();
        let top = q.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(lab.labels[top].len(), 2);

        let blowup = fan(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]);
        assert_eq!(blowup.rays().unwrap().len(), 3);
        assert!(blowup.boundary_map().is_ok());

        assert!(matches!(swap_quadrant().boundary_map(), Err(Error::UnstableRay(_))));
        let sing = fan(2, &[&[&[1, 0], &[1, 2]]]);
        assert!(matches!(sing.boundary_map(), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn groupoid_cap_is_enforced() {
        let q = quadrant();
        let r = ConeComplex::from_diagram_capped(q.cones().to_vec(), q.generators().to_vec(), 3);
        assert_eq!(r.err(), Some(Error::GroupoidBlowup(3)));
    }
}
