//! JSON file formats: fan files, contact files, assignment files and
//! resolution reports.
//!
//! Every document carries `schema_version`. Cones are written in id order
//! with rays sorted, so equal inputs serialize to equal bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{ComplexPoint, ConeComplex, ConeId, FaceMap};
use crate::cone::Cone;
use crate::contact::ContactComponent;
use crate::error::{Error, Result};
use crate::lattice::{IntegerMatrix, LatticeVector};
use crate::subdivision::{Assignment, PLDivisor, StarStep, SubdivisionMap};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fan,
    Diagram,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub id: u64,
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceMapEntry {
    pub from: u64,
    pub to: u64,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub ambient_rank: usize,
    pub mode: Mode,
    pub cones: Vec<ConeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub face_maps: Vec<FaceMapEntry>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
}

/// A parsed fan file: the complex and the complex id of each file id.
#[derive(Clone, Debug)]
pub struct LoadedFan {
    pub complex: ConeComplex,
    pub ids: BTreeMap<u64, ConeId>,
}

impl LoadedFan {
    pub fn cone_id(&self, file_id: u64) -> Result<ConeId> {
        self.ids.get(&file_id).copied().ok_or_else(|| Error::InvalidComplex(format!("no cone with id {file_id}")))
    }
}

fn to_vectors(rows: &[Vec<i64>]) -> Vec<LatticeVector> {
    rows.iter().map(|r| LatticeVector::from(r.as_slice())).collect()
}

fn matrix_rows(rows: &[Vec<i64>], cols: usize) -> Result<IntegerMatrix> {
    IntegerMatrix::from_rows(rows, cols)
}

impl FanFile {
    pub fn parse(text: &str) -> Result<FanFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComplex(format!("malformed fan file: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fan files serialize");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<LoadedFan> {
        let mut seen = BTreeSet::new();
        for c in &self.cones {
            if !seen.insert(c.id) {
                return Err(Error::InvalidComplex(format!("duplicate cone id {}", c.id)));
            }
        }
        let mut entries: Vec<&ConeEntry> = self.cones.iter().collect();
        entries.sort_by_key(|c| c.id);
        match self.mode {
            Mode::Fan => {
                if !self.face_maps.is_empty() {
                    return Err(Error::InvalidComplex("face_maps are only allowed in diagram mode".into()));
                }
                let rays: Vec<Vec<LatticeVector>> = entries.iter().map(|c| to_vectors(&c.rays)).collect();
                for (c, r) in entries.iter().zip(&rays) {
                    if c.ambient_rank.is_some_and(|n| n != self.ambient_rank) {
                        return Err(Error::InvalidComplex(format!("cone {} overrides the ambient rank in fan mode", c.id)));
                    }
                    if r.iter().any(|v| v.rank() != self.ambient_rank) {
                        return Err(Error::RankMismatch { expected: self.ambient_rank, got: r[0].rank() });
                    }
                }
                let complex = ConeComplex::from_fan(self.ambient_rank, &rays)?;
                let mut ids = BTreeMap::new();
                for (c, r) in entries.iter().zip(&rays) {
                    let cone = Cone::new(self.ambient_rank, r)?;
                    let id = complex.cone_by_rays(cone.rays()).expect("listed cones are cones of their fan");
                    ids.insert(c.id, id);
                }
                Ok(LoadedFan { complex, ids })
            }
            Mode::Diagram => {
                let ids: BTreeMap<u64, ConeId> = entries.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
                let cones = entries
                    .iter()
                    .map(|c| Cone::new(c.ambient_rank.unwrap_or(self.ambient_rank), &to_vectors(&c.rays)))
                    .collect::<Result<Vec<_>>>()?;
                let mut maps = Vec::with_capacity(self.face_maps.len());
                for m in &self.face_maps {
                    let lookup = |id: u64| {
                        ids.get(&id).copied().ok_or_else(|| Error::InvalidComplex(format!("face map refers to unknown cone {id}")))
                    };
                    let (source, target) = (lookup(m.from)?, lookup(m.to)?);
                    let map = matrix_rows(&m.matrix, cones[source].ambient_rank())?;
                    maps.push(FaceMap { source, target, map });
                }
                Ok(LoadedFan { complex: ConeComplex::from_diagram(cones, maps)?, ids })
            }
        }
    }

    /// Fan mode (maximal cones only) for embedded complexes, diagram mode
    /// with every cone and generating face map otherwise.
    pub fn from_complex(x: &ConeComplex) -> FanFile {
        let ambient_rank = x.cones().first().map_or(0, Cone::ambient_rank);
        let same_rank = x.cones().iter().all(|c| c.ambient_rank() == ambient_rank);
        let rays_of = |c: &Cone| c.rays().iter().map(|r| r.coords().to_vec()).collect::<Vec<_>>();
        if same_rank && x.is_embedded() {
            let cones = x
                .maximal_cones()
                .into_iter()
                .enumerate()
                .map(|(i, id)| ConeEntry { id: i as u64, rays: rays_of(&x.cones()[id]), ambient_rank: None })
                .collect();
            return FanFile { schema_version: SCHEMA_VERSION, ambient_rank, mode: Mode::Fan, cones, face_maps: Vec::new(), metadata: Value::Null };
        }
        Self::diagram_of(x)
    }

    /// Diagram mode regardless of shape; cone ids are complex ids.
    pub fn diagram_of(x: &ConeComplex) -> FanFile {
        let ambient_rank = x.cones().first().map_or(0, Cone::ambient_rank);
        let cones = x
            .cones()
            .iter()
            .enumerate()
            .map(|(i, c)| ConeEntry {
                id: i as u64,
                rays: c.rays().iter().map(|r| r.coords().to_vec()).collect(),
                ambient_rank: (c.ambient_rank() != ambient_rank).then_some(c.ambient_rank()),
            })
            .collect();
        let face_maps = x
            .generators()
            .iter()
            .map(|g| FaceMapEntry { from: g.source as u64, to: g.target as u64, matrix: g.map.to_rows() })
            .collect();
        FanFile { schema_version: SCHEMA_VERSION, ambient_rank, mode: Mode::Diagram, cones, face_maps, metadata: Value::Null }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub cone: u64,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub base_degree: i64,
    pub markings: Vec<Marking>,
}

impl ContactFile {
    pub fn parse(text: &str) -> Result<ContactFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComplex(format!("malformed contact file: {e}")))
    }

    /// Markings as points of the loaded complex; each must lie in its cone.
    pub fn points(&self, fan: &LoadedFan) -> Result<Vec<ComplexPoint>> {
        self.markings
            .iter()
            .map(|m| {
                let cone = fan.cone_id(m.cone)?;
                let p = ComplexPoint { cone, point: LatticeVector::from(m.coords.as_slice()) };
                if !fan.complex.cone(cone)?.contains(&p.point)? {
                    return Err(Error::NotContained(m.coords.clone()));
                }
                Ok(p)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub source: u64,
    pub target: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

/// Source cone to target cone assignment. Ids are file ids of the two fan
/// files; an empty list asks for geometric inference, which needs both
/// complexes embedded in the same lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub assignment: Vec<AssignmentEntry>,
}

impl AssignmentFile {
    pub fn parse(text: &str) -> Result<AssignmentFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComplex(format!("malformed assignment file: {e}")))
    }

    pub fn build(&self, source: LoadedFan, target: LoadedFan) -> Result<SubdivisionMap> {
        if self.assignment.is_empty() {
            return SubdivisionMap::infer(source.complex, target.complex);
        }
        let mut slots: Vec<Option<Assignment>> = vec![None; source.complex.len()];
        for e in &self.assignment {
            let s = source.cone_id(e.source)?;
            let t = target.cone_id(e.target)?;
            let cols = source.complex.cone(s)?.ambient_rank();
            let map = match &e.matrix {
                Some(rows) => matrix_rows(rows, cols)?,
                None => IntegerMatrix::identity(cols),
            };
            slots[s] = Some(Assignment { target: t, map });
        }
        let assignment = slots
            .into_iter()
            .enumerate()
            .map(|(s, a)| a.ok_or_else(|| Error::NotASubdivision(format!("source cone {s} has no assignment"))))
            .collect::<Result<Vec<_>>>()?;
        SubdivisionMap::from_assignment(source.complex, target.complex, assignment)
    }

    pub fn from_map(f: &SubdivisionMap) -> AssignmentFile {
        let assignment = f
            .assignment()
            .iter()
            .enumerate()
            .map(|(s, a)| AssignmentEntry { source: s as u64, target: a.target as u64, matrix: Some(a.map.to_rows()) })
            .collect();
        AssignmentFile { schema_version: SCHEMA_VERSION, assignment }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayEntry {
    pub id: usize,
    pub cone: ConeId,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub ray: usize,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolveReport {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub history: Vec<StarStep>,
    pub rays: Vec<RayEntry>,
    pub exceptional_rays: Vec<usize>,
    pub multiplicity_trace: Vec<Vec<u64>>,
    pub ample_coefficients: Vec<CoefficientEntry>,
    /// Ray-orbit labels of the rays of each source cone, in ray order.
    pub boundary_labeling: Vec<Vec<usize>>,
    /// The subdivided complex, in diagram mode so that ids are preserved.
    pub source: FanFile,
    /// The map to the input complex; target ids are complex ids of the
    /// input.
    pub assignment: AssignmentFile,
}

impl ResolveReport {
    pub fn parse(text: &str) -> Result<ResolveReport> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComplex(format!("malformed report: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn divisor(&self) -> PLDivisor {
        let mut d = PLDivisor::zero();
        for c in &self.ample_coefficients {
            d.set(c.ray, c.m);
        }
        d
    }

    /// Rebuilds the subdivision map onto the given target complex.
    pub fn subdivision(&self, target: ConeComplex) -> Result<SubdivisionMap> {
        let source = self.source.load()?.complex;
        let mut assignment = Vec::with_capacity(self.assignment.assignment.len());
        for (s, e) in self.assignment.assignment.iter().enumerate() {
            if e.source as usize != s {
                return Err(Error::InvalidComplex("report assignment is not in source order".into()));
            }
            let cols = source.cone(s)?.ambient_rank();
            let map = match &e.matrix {
                Some(rows) => matrix_rows(rows, cols)?,
                None => IntegerMatrix::identity(cols),
            };
            assignment.push(Assignment { target: e.target as usize, map });
        }
        SubdivisionMap::from_assignment(source, target, assignment)
    }
}

pub fn ray_entries(x: &ConeComplex) -> Result<Vec<RayEntry>> {
    Ok(x
        .rays()?
        .orbits()
        .iter()
        .enumerate()
        .map(|(id, p)| RayEntry { id, cone: p.cone, coords: p.point.coords().to_vec() })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentsReport {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub bound: u64,
    pub components: Vec<ContactComponent>,
}

/// Face lattice in DOT: one node per isomorphism class of cones, one edge
/// per generating face map between classes of different dimension.
pub fn to_dot(x: &ConeComplex) -> String {
    let n = x.len();
    // two cones are isomorphic when they map onto the same face of a cone
    let mut class: Vec<ConeId> = (0..n).collect();
    let mut by_image: BTreeMap<(ConeId, &[LatticeVector]), ConeId> = BTreeMap::new();
    for m in x.morphisms() {
        let other = *by_image.entry((m.target(), m.image_rays())).or_insert(m.source());
        let (a, b) = (class[other].min(class[m.source()]), class[other].max(class[m.source()]));
        for c in class.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
    }
    let mut out = String::from("digraph complex {\n    rankdir=BT;\n");
    for id in 0..n {
        if class[id] == id {
            let c = &x.cones()[id];
            let rays: Vec<String> = c.rays().iter().map(|r| r.to_string()).collect();
            out.push_str(&format!("    c{id} [label=\"{id}: dim {} [{}]\"];\n", c.dim(), rays.join(" ")));
        }
    }
    let mut edges = BTreeSet::new();
    for g in x.generators() {
        let (s, t) = (class[g.source], class[g.target]);
        if s != t {
            edges.insert((s, t, g.map.to_rows()));
        }
    }
    for (s, t, _) in edges {
        out.push_str(&format!("    c{s} -> c{t};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{fan, swap_quadrant};
    use crate::subdivision::resolve;

    #[test]
    fn fan_round_trip() {
        let x = fan(2, &[&[&[1, 0], &[1, 2]], &[&[1, 2], &[-1, 1]]]);
        let file = FanFile::from_complex(&x);
        assert_eq!(file.mode, Mode::Fan);
        let back = FanFile::parse(&file.to_json()).unwrap().load().unwrap();
        assert_eq!(back.complex.canonical_form(), x.canonical_form());
    }

    #[test]
    fn diagram_round_trip() {
        let x = swap_quadrant();
        let file = FanFile::from_complex(&x);
        assert_eq!(file.mode, Mode::Diagram);
        let back = FanFile::parse(&file.to_json()).unwrap().load().unwrap();
        assert_eq!(back.complex.canonical_form(), x.canonical_form());
        let y = resolve(&x).unwrap();
        let file = FanFile::diagram_of(y.source());
        let back = FanFile::parse(&file.to_json()).unwrap().load().unwrap();
        assert_eq!(back.complex.canonical_form(), y.source().canonical_form());
    }

    #[test]
    fn rejects_duplicates_and_unknown_ids() {
        let text = r#"{"ambient_rank":2,"mode":"fan","cones":[{"id":1,"rays":[[1,0]]},{"id":1,"rays":[[0,1]]}]}"#;
        assert!(matches!(FanFile::parse(text).unwrap().load(), Err(Error::InvalidComplex(_))));
        let text = r#"{"ambient_rank":1,"mode":"diagram","cones":[{"id":0,"rays":[[1]]}],
            "face_maps":[{"from":0,"to":5,"matrix":[[1]]}]}"#;
        assert!(matches!(FanFile::parse(text).unwrap().load(), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn overlapping_cones_are_not_a_fan() {
        let text = r#"{"ambient_rank":2,"mode":"fan","cones":[{"id":0,"rays":[[1,0],[1,2]]},{"id":1,"rays":[[1,1],[0,1]]}]}"#;
        assert!(matches!(FanFile::parse(text).unwrap().load(), Err(Error::NotAFan(_))));
    }

    #[test]
    fn dot_has_one_node_per_class() {
        let dot = to_dot(&swap_quadrant());
        assert_eq!(dot.matches("[label=").count(), 3);
        assert!(dot.starts_with("digraph"));
    }
}
