//! Strongly convex rational polyhedral cones (fine, saturated, sharp monoids).
//!
//! A cone is stored by its primitive extreme rays in the ambient lattice.
//! Everything dual (facet normals, dual Hilbert basis) lives in coordinates
//! of the saturated lattice of its span, so cones of lower dimension are
//! handled the same way as full-dimensional ones.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lattice::{
    kernel_basis, rank, saturated_span_basis, solve_rational, to_i64, hermite_normal_form, IntegerMatrix,
    LatticeVector, LinearChart, Rational,
};
use crate::par;

/// Largest span dimension for which dual computations are attempted.
pub const MAX_DUAL_RANK: usize = 6;

/// Largest fundamental parallelepiped enumerated during Hilbert basis
/// computation.
pub const MAX_PARALLELEPIPED: i128 = 1 << 22;

#[derive(Clone)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    span: LinearChart,
    span_rays: Vec<LatticeVector>,
    facet_normals: Vec<LatticeVector>,
    facet_rays: Vec<Vec<usize>>,
    faces: OnceLock<Vec<Face>>,
    dual_hilbert: OnceLock<Vec<LatticeVector>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.rays)
    }
}

/// A face of a cone, identified by the rays it contains and the facets
/// vanishing on it.
#[derive(Clone, Debug)]
pub struct Face {
    pub ray_indices: Vec<usize>,
    pub selector: Vec<usize>,
    pub cone: Cone,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Facets of the full-dimensional cone generated by `gens` in `Z^d`, as
/// primitive inward normals with the indices of the generators they vanish on.
fn facets_of(gens: &[LatticeVector], d: usize) -> Result<Vec<(LatticeVector, Vec<usize>)>> {
    let mut found = BTreeSet::new();
    for subset in combinations(gens.len(), d - 1) {
        let rows: Vec<LatticeVector> = subset.iter().map(|&i| gens[i].clone()).collect();
        let k = kernel_basis(&rows, d)?;
        if k.len() != 1 {
            continue;
        }
        let n = k[0].clone();
        let vals = gens.iter().map(|g| g.dot(&n)).collect::<Result<Vec<_>>>()?;
        if vals.iter().all(|&x| x >= 0) {
            found.insert(n);
        } else if vals.iter().all(|&x| x <= 0) {
            found.insert(n.neg()?);
        }
    }
    found
        .into_iter()
        .map(|n| {
            let on = gens
                .iter()
                .enumerate()
                .filter_map(|(i, g)| match g.dot(&n) {
                    Ok(0) => Some(Ok(i)),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((n, on))
        })
        .collect()
}

impl Cone {
    /// The cone generated by `generators`. Zero generators are ignored,
    /// the rest are made primitive and pruned to the extreme rays.
    pub fn new(ambient_rank: usize, generators: &[LatticeVector]) -> Result<Cone> {
        let mut gens = BTreeSet::new();
        for g in generators {
            if g.rank() != ambient_rank {
                return Err(Error::RankMismatch { expected: ambient_rank, got: g.rank() });
            }
            if !g.is_zero() {
                gens.insert(g.primitive()?);
            }
        }
        let gens: Vec<LatticeVector> = gens.into_iter().collect();
        let basis = saturated_span_basis(&gens, ambient_rank)?;
        let span = LinearChart::new(&basis, ambient_rank)?;
        let d = basis.len();
        if d > MAX_DUAL_RANK {
            return Err(Error::DualRankCap(d));
        }
        let span_gens = gens
            .iter()
            .map(|g| {
                span.integer_coords(g)?
                    .map(LatticeVector::new)
                    .ok_or_else(|| Error::BadMatrix("generator outside its own span lattice".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        if d == 0 {
            return Ok(Cone {
                ambient_rank,
                rays: Vec::new(),
                span,
                span_rays: Vec::new(),
                facet_normals: Vec::new(),
                facet_rays: Vec::new(),
                faces: OnceLock::new(),
                dual_hilbert: OnceLock::new(),
            });
        }
        let facets = facets_of(&span_gens, d)?;
        let normals: Vec<LatticeVector> = facets.iter().map(|(n, _)| n.clone()).collect();
        if facets.is_empty() || rank(&normals, d)? != d {
            return Err(Error::NotStronglyConvex);
        }
        // extreme generators: the facets through them cut out a line
        let mut keep = Vec::new();
        for i in 0..gens.len() {
            let through: Vec<LatticeVector> =
                facets.iter().filter(|(_, on)| on.contains(&i)).map(|(n, _)| n.clone()).collect();
            if rank(&through, d)? == d - 1 {
                keep.push(i);
            }
        }
        let rays: Vec<LatticeVector> = keep.iter().map(|&i| gens[i].clone()).collect();
        let span_rays: Vec<LatticeVector> = keep.iter().map(|&i| span_gens[i].clone()).collect();
        let facet_rays = facets
            .iter()
            .map(|(_, on)| keep.iter().enumerate().filter(|(_, g)| on.contains(g)).map(|(j, _)| j).collect())
            .collect();
        Ok(Cone {
            ambient_rank,
            rays,
            span,
            span_rays,
            facet_normals: normals,
            facet_rays,
            faces: OnceLock::new(),
            dual_hilbert: OnceLock::new(),
        })
    }

    pub fn zero(ambient_rank: usize) -> Cone {
        Cone::new(ambient_rank, &[]).expect("zero cone")
    }

    /// The cone cut out by `ineqs[i] · v ≥ 0`; must be pointed.
    pub fn from_inequalities(ambient_rank: usize, ineqs: &[LatticeVector]) -> Result<Cone> {
        let n = ambient_rank;
        if n == 0 {
            return Cone::new(0, &[]);
        }
        let ineqs: Vec<LatticeVector> = ineqs.iter().filter(|v| !v.is_zero()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut rays = BTreeSet::new();
        let satisfies = |v: &LatticeVector| -> Result<bool> {
            for a in &ineqs {
                if a.dot(v)? < 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if n == 1 {
            for cand in [LatticeVector::from([1]), LatticeVector::from([-1])] {
                if satisfies(&cand)? {
                    rays.insert(cand);
                }
            }
        }
        for subset in combinations(ineqs.len(), n.saturating_sub(1)) {
            if n == 1 {
                break;
            }
            let rows: Vec<LatticeVector> = subset.iter().map(|&i| ineqs[i].clone()).collect();
            let k = kernel_basis(&rows, n)?;
            if k.len() != 1 {
                continue;
            }
            for cand in [k[0].clone(), k[0].neg()?] {
                if satisfies(&cand)? {
                    rays.insert(cand);
                }
            }
        }
        let rays: Vec<LatticeVector> = rays.into_iter().collect();
        Cone::new(n, &rays)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_index(&self, r: &LatticeVector) -> Option<usize> {
        self.rays.binary_search(r).ok()
    }

    /// Rays in coordinates of the span lattice basis.
    pub fn span_rays(&self) -> &[LatticeVector] {
        &self.span_rays
    }

    /// Inward facet normals in coordinates of the span lattice.
    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    /// Basis of the saturated span lattice.
    pub fn span_basis(&self) -> &[LatticeVector] {
        self.span.vectors()
    }

    /// Coordinates of `v` in the span lattice basis, `None` outside the span.
    pub fn span_coords(&self, v: &LatticeVector) -> Result<Option<LatticeVector>> {
        if v.rank() != self.ambient_rank {
            return Err(Error::RankMismatch { expected: self.ambient_rank, got: v.rank() });
        }
        Ok(self.span.integer_coords(v)?.map(LatticeVector::new))
    }

    pub fn from_span_coords(&self, c: &LatticeVector) -> Result<LatticeVector> {
        self.span.combine(c.coords())
    }

    fn normal_values(&self, v: &LatticeVector) -> Result<Option<Vec<i64>>> {
        match self.span_coords(v)? {
            None => Ok(None),
            Some(c) => self.facet_normals.iter().map(|n| n.dot(&c)).collect::<Result<Vec<_>>>().map(Some),
        }
    }

    pub fn contains(&self, v: &LatticeVector) -> Result<bool> {
        Ok(self.normal_values(v)?.is_some_and(|vals| vals.iter().all(|&x| x >= 0)))
    }

    pub fn relint_contains(&self, v: &LatticeVector) -> Result<bool> {
        Ok(self.normal_values(v)?.is_some_and(|vals| vals.iter().all(|&x| x > 0)))
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    /// Index of the sublattice generated by the rays in the span lattice.
    pub fn multiplicity(&self) -> Result<u64> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let m = IntegerMatrix::from_vectors(&self.span_rays, self.dim())?;
        crate::lattice::abs_determinant(&m)
    }

    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.multiplicity().ok() == Some(1)
    }

    /// Sum of the primitive ray generators.
    pub fn barycenter(&self) -> Result<LatticeVector> {
        LatticeVector::sum(self.ambient_rank, &self.rays)
    }

    fn face_from_indices(&self, idx: Vec<usize>) -> Result<Face> {
        let selector = (0..self.facet_rays.len())
            .filter(|&f| idx.iter().all(|i| self.facet_rays[f].contains(i)))
            .collect();
        let rays: Vec<LatticeVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Ok(Face { ray_indices: idx, selector, cone: Cone::new(self.ambient_rank, &rays)? })
    }

    /// All faces, from `{0}` up to the cone itself, ordered by dimension and
    /// then by ray indices.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| {
            let all: Vec<usize> = (0..self.rays.len()).collect();
            let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
            sets.insert(all);
            loop {
                let mut added = false;
                let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
                for s in &current {
                    for f in &self.facet_rays {
                        let inter: Vec<usize> = s.iter().copied().filter(|i| f.contains(i)).collect();
                        if sets.insert(inter) {
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
            let mut faces: Vec<Face> = sets
                .into_iter()
                .map(|s| self.face_from_indices(s).expect("faces of a valid cone are valid cones"))
                .collect();
            faces.sort_by(|a, b| (a.dim(), &a.ray_indices).cmp(&(b.dim(), &b.ray_indices)));
            faces
        })
    }

    /// The face with exactly the given (ambient) rays.
    pub fn face_with_rays(&self, rays: &[LatticeVector]) -> Option<&Face> {
        let mut idx = rays.iter().map(|r| self.ray_index(r)).collect::<Option<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != rays.len() {
            return None;
        }
        self.faces().iter().find(|f| f.ray_indices == idx)
    }

    /// The unique face containing `v` in its relative interior.
    pub fn minimal_face(&self, v: &LatticeVector) -> Result<&Face> {
        let vals = self.normal_values(v)?.ok_or_else(|| Error::NotContained(v.coords().to_vec()))?;
        if vals.iter().any(|&x| x < 0) {
            return Err(Error::NotContained(v.coords().to_vec()));
        }
        let idx: Vec<usize> = (0..self.rays.len())
            .filter(|i| vals.iter().enumerate().all(|(f, &x)| x != 0 || self.facet_rays[f].contains(i)))
            .collect();
        Ok(self
            .faces()
            .iter()
            .find(|f| f.ray_indices == idx)
            .expect("vanishing set of facet normals is a face"))
    }

    /// Inequalities `a · v ≥ 0` in the ambient lattice cutting out the cone.
    pub fn inequalities(&self) -> Result<Vec<LatticeVector>> {
        let (eqs, normals) = self.ambient_description()?;
        let mut out = Vec::with_capacity(2 * eqs.len() + normals.len());
        for e in eqs {
            out.push(e.neg()?);
            out.push(e);
        }
        out.extend(normals);
        Ok(out)
    }

    /// Equations `e · v = 0` of the span and facet normals `a · v ≥ 0`,
    /// both as ambient integer functionals.
    pub fn ambient_description(&self) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
        let n = self.ambient_rank;
        let basis = self.span.vectors();
        let eqs = kernel_basis(basis, n)?;
        if basis.is_empty() {
            return Ok((eqs, Vec::new()));
        }
        let a: Vec<Vec<Rational>> =
            basis.iter().map(|b| b.coords().iter().map(|&x| Rational::from_integer(x as i128)).collect()).collect();
        let mut normals = Vec::with_capacity(self.facet_normals.len());
        for normal in &self.facet_normals {
            let rhs: Vec<Rational> = normal.coords().iter().map(|&x| Rational::from_integer(x as i128)).collect();
            let sol = solve_rational(&a, &rhs, n).ok_or_else(|| Error::BadMatrix("unliftable facet normal".into()))?;
            let den = sol.iter().fold(1i128, |l, q| num_integer::lcm(l, *q.denom()));
            let lifted = sol.iter().map(|q| to_i64(q.numer() * (den / q.denom()))).collect::<Result<Vec<_>>>()?;
            normals.push(LatticeVector::new(lifted));
        }
        Ok((eqs, normals))
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::RankMismatch { expected: self.ambient_rank, got: other.ambient_rank });
        }
        let mut ineqs = self.inequalities()?;
        ineqs.extend(other.inequalities()?);
        Cone::from_inequalities(self.ambient_rank, &ineqs)
    }

    /// Simplices (as ray index lists) of the pulling triangulation that
    /// cones each face over its lexicographically least ray.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        self.triangulate_face(&all, self.dim())
    }

    fn triangulate_face(&self, face: &[usize], dim: usize) -> Vec<Vec<usize>> {
        if face.len() == dim {
            return vec![face.to_vec()];
        }
        let apex = face[0];
        let mut out = Vec::new();
        for f in self.faces() {
            if f.dim() + 1 == dim
                && !f.ray_indices.contains(&apex)
                && f.ray_indices.iter().all(|i| face.contains(i))
            {
                for mut s in self.triangulate_face(&f.ray_indices, dim - 1) {
                    s.insert(0, apex);
                    s.sort_unstable();
                    out.push(s);
                }
            }
        }
        out
    }

    /// Minimal generating set of the monoid `σ ∩ N`, sorted.
    pub fn hilbert_basis(&self) -> Result<Vec<LatticeVector>> {
        let span_basis = self.hilbert_basis_in_span()?;
        let mut out = span_basis.iter().map(|c| self.from_span_coords(c)).collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    fn hilbert_basis_in_span(&self) -> Result<Vec<LatticeVector>> {
        let d = self.dim();
        if d == 0 {
            return Ok(Vec::new());
        }
        let simplices = self.triangulation();
        let pieces = par::try_map(&simplices, |s| {
            let gens: Vec<LatticeVector> = s.iter().map(|&i| self.span_rays[i].clone()).collect();
            parallelepiped_points(&gens, d)
        })?;
        let mut candidates: BTreeSet<LatticeVector> = self.span_rays.iter().cloned().collect();
        for p in pieces {
            candidates.extend(p);
        }
        let candidates: Vec<LatticeVector> = candidates.into_iter().collect();
        let keep = par::try_map(&candidates, |x| -> Result<bool> {
            for h in &candidates {
                if h == x {
                    continue;
                }
                let diff = x.checked_sub(h)?;
                let mut inside = true;
                for n in &self.facet_normals {
                    if n.dot(&diff)? < 0 {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        Ok(candidates.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect())
    }

    /// Hilbert basis of the dual cone, in coordinates dual to the span
    /// lattice basis.
    pub fn dual_hilbert_basis(&self) -> Result<Vec<LatticeVector>> {
        let d = self.dim();
        if d == 0 {
            return Ok(Vec::new());
        }
        if let Some(b) = self.dual_hilbert.get() {
            return Ok(b.clone());
        }
        let b = Cone::new(d, &self.facet_normals)?.hilbert_basis()?;
        Ok(self.dual_hilbert.get_or_init(|| b).clone())
    }
}

/// Nonzero lattice points of the half-open parallelepiped spanned by the
/// linearly independent `gens` in `Z^d`.
fn parallelepiped_points(gens: &[LatticeVector], d: usize) -> Result<Vec<LatticeVector>> {
    let chart = LinearChart::new(gens, d)?;
    let det = chart.denominator();
    if det > MAX_PARALLELEPIPED {
        return Err(Error::ResourceCap(format!("parallelepiped of volume {det}")));
    }
    if det == 1 {
        return Ok(Vec::new());
    }
    // coset representatives of Z^d / lattice(gens) from the HNF diagonal
    let (h, _) = hermite_normal_form(&IntegerMatrix::from_vectors(gens, d)?)?;
    let diag: Vec<i64> = (0..d).map(|i| h.get(i, i)).collect();
    let mut out = Vec::new();
    let mut rep = vec![0i64; d];
    loop {
        let v = LatticeVector::new(rep.clone());
        let (num, den) = chart.coords(&v)?.expect("full rank chart");
        let frac: Vec<i128> = num.iter().map(|n| n.rem_euclid(den)).collect();
        let mut acc = vec![0i128; d];
        for (g, f) in gens.iter().zip(&frac) {
            for (a, &x) in acc.iter_mut().zip(g.coords()) {
                *a = a.checked_add(f.checked_mul(x as i128).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        let p = LatticeVector::new(acc.into_iter().map(|a| to_i64(a / den)).collect::<Result<Vec<_>>>()?);
        if !p.is_zero() {
            out.push(p);
        }
        // odometer over 0 <= rep[i] < diag[i]
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            rep[i] += 1;
            if rep[i] < diag[i] {
                break;
            }
            rep[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from(c)
    }

    fn cone(rank: usize, rays: &[&[i64]]) -> Cone {
        Cone::new(rank, &rays.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    /// Independent oracle: Carathéodory membership via rational solves over
    /// linearly independent subsets of the rays, then irreducibility by
    /// increasing coordinate sum. Only valid for cones in the nonnegative
    /// orthant, where the coordinate sum is a positive grading.
    pub(crate) fn brute_force_hilbert(rays: &[LatticeVector], rank: usize) -> Vec<LatticeVector> {
        let member = |p: &LatticeVector| -> bool {
            if p.is_zero() {
                return true;
            }
            for k in 1..=rank.min(rays.len()) {
                for s in combinations(rays.len(), k) {
                    let a: Vec<Vec<Rational>> = (0..rank)
                        .map(|c| s.iter().map(|&i| Rational::from_integer(rays[i].coords()[c] as i128)).collect())
                        .collect();
                    let b: Vec<Rational> = p.coords().iter().map(|&x| Rational::from_integer(x as i128)).collect();
                    if let Some(x) = solve_rational(&a, &b, k) {
                        // accept only if the solution is exact and nonnegative
                        let ok = (0..rank).all(|c| {
                            let lhs: Rational = s.iter().zip(&x).map(|(&i, q)| *q * Rational::from_integer(rays[i].coords()[c] as i128)).sum();
                            lhs == b[c]
                        });
                        if ok && x.iter().all(|q| *q >= Rational::from_integer(0)) {
                            return true;
                        }
                    }
                }
            }
            false
        };
        let bound: Vec<i64> = (0..rank).map(|c| rays.iter().map(|r| r.coords()[c].abs()).sum()).collect();
        let mut pts = Vec::new();
        let mut cur = vec![0i64; rank];
        loop {
            let p = LatticeVector::new(cur.clone());
            if !p.is_zero() && member(&p) {
                pts.push(p);
            }
            let mut i = 0;
            loop {
                if i == rank {
                    pts.sort_by_key(|p| (p.coords().iter().sum::<i64>(), p.clone()));
                    let mut basis: Vec<LatticeVector> = Vec::new();
                    for p in pts {
                        if !basis.iter().any(|h| member(&p.checked_sub(h).unwrap())) {
                            basis.push(p);
                        }
                    }
                    basis.sort();
                    return basis;
                }
                cur[i] += 1;
                if cur[i] <= bound[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn containment_and_minimal_face() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(q.contains(&v(&[2, 3])).unwrap());
        assert_eq!(q.minimal_face(&v(&[2, 3])).unwrap().cone, q);
        assert_eq!(q.minimal_face(&v(&[4, 0])).unwrap().cone.rays(), &[v(&[1, 0])]);
        assert_eq!(q.minimal_face(&v(&[0, 0])).unwrap().dim(), 0);
        assert!(matches!(q.contains(&v(&[1, 0, 0])), Err(Error::RankMismatch { .. })));

        let a = cone(2, &[&[1, 0], &[1, 2]]);
        assert_eq!(a.facet_normals(), &[v(&[0, 1]), v(&[2, -1])]);
        assert!(a.contains(&v(&[1, 1])).unwrap());
        assert_eq!(a.minimal_face(&v(&[1, 1])).unwrap().cone, a);
        assert!(!a.contains(&v(&[0, 1])).unwrap());
    }

    #[test]
    fn face_counts() {
        assert_eq!(cone(2, &[&[1, 0], &[0, 1]]).faces().len(), 4);
        assert_eq!(cone(2, &[&[1, 1]]).faces().len(), 2);
        assert_eq!(cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).faces().len(), 8);
        // square pyramid: 0, 4 rays, 4 two-faces, itself
        assert_eq!(cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).faces().len(), 10);
    }

    #[test]
    fn redundant_generators_are_pruned() {
        let c = cone(2, &[&[1, 0], &[2, 2], &[0, 3], &[1, 1]]);
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn lines_are_rejected() {
        assert_eq!(Cone::new(2, &[v(&[1, 0]), v(&[-1, 0])]), Err(Error::NotStronglyConvex));
        assert_eq!(Cone::new(1, &[v(&[1]), v(&[-1])]), Err(Error::NotStronglyConvex));
    }

    #[test]
    fn hilbert_basis_examples() {
        assert_eq!(cone(2, &[&[1, 0], &[0, 1]]).hilbert_basis().unwrap(), vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(
            cone(2, &[&[1, 0], &[1, 2]]).hilbert_basis().unwrap(),
            vec![v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]
        );
        let expect: Vec<LatticeVector> = (0..=5).map(|j| v(&[1, j])).collect();
        assert_eq!(cone(2, &[&[1, 0], &[1, 5]]).hilbert_basis().unwrap(), expect);
    }

    #[test]
    fn hilbert_basis_of_lower_dimensional_cone() {
        // the plane x = z in rank 3; span lattice generated by (1,0,1),(0,1,0)
        let c = cone(3, &[&[1, 0, 1], &[1, 2, 1]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.multiplicity().unwrap(), 2);
        assert_eq!(c.hilbert_basis().unwrap(), vec![v(&[1, 0, 1]), v(&[1, 1, 1]), v(&[1, 2, 1])]);
    }

    #[test]
    fn dual_hilbert_basis_examples() {
        assert_eq!(cone(2, &[&[1, 0], &[0, 1]]).dual_hilbert_basis().unwrap(), vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(
            cone(2, &[&[1, 0], &[1, 2]]).dual_hilbert_basis().unwrap(),
            vec![v(&[0, 1]), v(&[1, 0]), v(&[2, -1])]
        );
        assert_eq!(cone(2, &[&[1, 0]]).dual_hilbert_basis().unwrap(), vec![v(&[1])]);
    }

    #[test]
    fn multiplicity_examples() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(q.multiplicity().unwrap(), 1);
        assert!(q.is_smooth());
        let a = cone(2, &[&[1, 0], &[1, 2]]);
        assert_eq!(a.multiplicity().unwrap(), 2);
        assert!(!a.is_smooth());
        let p = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert!(!p.is_simplicial());
        assert!(!p.is_smooth());
        assert_eq!(p.multiplicity(), Err(Error::NotSimplicial));
    }

    #[test]
    fn rank_cap() {
        let rays: Vec<LatticeVector> = (0..7).map(|i| LatticeVector::unit(7, i)).collect();
        assert_eq!(Cone::new(7, &rays), Err(Error::DualRankCap(7)));
    }

    #[test]
    fn intersection_of_quadrants() {
        let a = cone(2, &[&[1, 0], &[1, 2]]);
        let b = cone(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.intersection(&b).unwrap(), cone(2, &[&[1, 1], &[1, 2]]));
        let c = cone(2, &[&[0, 1], &[-1, 0]]);
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(q.intersection(&c).unwrap(), cone(2, &[&[0, 1]]));
    }

    #[test]
    fn non_simplicial_hilbert_basis_matches_oracle() {
        let rays = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 0, 1]), v(&[0, 1, 1])];
        let c = Cone::new(3, &rays).unwrap();
        assert_eq!(c.hilbert_basis().unwrap(), brute_force_hilbert(&rays, 3));
    }

    fn small_cone() -> impl Strategy<Value = (usize, Vec<LatticeVector>)> {
        (2usize..=3).prop_flat_map(|r| {
            (Just(r), proptest::collection::vec(proptest::collection::vec(0i64..=4, r), 1..=4))
        })
        .prop_map(|(r, rays)| (r, rays.into_iter().map(LatticeVector::new).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hilbert_basis_matches_oracle((r, rays) in small_cone()) {
            let c = match Cone::new(r, &rays) { Ok(c) => c, Err(_) => return Ok(()) };
            prop_assume!(c.dim() > 0);
            let hb = c.hilbert_basis().unwrap();
            prop_assert_eq!(hb.clone(), brute_force_hilbert(c.rays(), r));
            if c.is_smooth() {
                prop_assert_eq!(hb, c.rays().to_vec());
            }
        }

        #[test]
        fn duality_and_faces((r, rays) in small_cone()) {
            let c = match Cone::new(r, &rays) { Ok(c) => c, Err(_) => return Ok(()) };
            let dual = c.dual_hilbert_basis().unwrap();
            for h in c.hilbert_basis().unwrap() {
                let hc = c.span_coords(&h).unwrap().unwrap();
                for xi in &dual {
                    prop_assert!(xi.dot(&hc).unwrap() >= 0);
                }
            }
            // faces closed under intersection
            let faces = c.faces();
            for a in faces {
                for b in faces {
                    let inter: Vec<usize> = a.ray_indices.iter().copied().filter(|i| b.ray_indices.contains(i)).collect();
                    prop_assert!(faces.iter().any(|f| f.ray_indices == inter));
                }
            }
            // minimal face is the intersection of all faces containing the point
            let p = LatticeVector::sum(r, c.rays().iter().take(2)).unwrap();
            let m = c.minimal_face(&p).unwrap();
            let mut inter: Vec<usize> = (0..c.rays().len()).collect();
            for f in faces {
                if f.cone.contains(&p).unwrap() {
                    inter.retain(|i| f.ray_indices.contains(i));
                }
            }
            prop_assert_eq!(&m.ray_indices, &inter);
        }
    }
}
