use std::collections::HashMap;
use std::sync::Arc;

use super::{maximal_multiplicities, Assignment, Stage, StarStep, StepKind, SubdivisionMap};
use crate::complex::{ComplexPoint, ConeComplex, ConeId, FaceMap};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{IntegerMatrix, LatticeVector};
use crate::par;

/// Star subdivision of `x` at the stable vector `center`.
pub fn star_subdivide(x: &ConeComplex, center: &ComplexPoint) -> Result<SubdivisionMap> {
    let stage = star_stage(x, center, StepKind::Manual)?;
    check_valid(&stage.complex)?;
    let mut f = SubdivisionMap::identity(x);
    f.push_stage(stage)?;
    Ok(f)
}

pub(crate) fn check_valid(x: &ConeComplex) -> Result<()> {
    let report = x.validate();
    match report.diagnostics.first() {
        None => Ok(()),
        Some(d) => Err(Error::InvalidComplex(d.message.clone())),
    }
}

/// Cones of the star of one chart lying in its relative interior.
fn chart_pieces(sigma: &Cone, lift: Option<&LatticeVector>) -> Result<Vec<Cone>> {
    let Some(x) = lift else { return Ok(vec![sigma.clone()]) };
    let xp = x.primitive()?;
    let mut out = Vec::new();
    for tau in sigma.faces() {
        if tau.cone.contains(x)? {
            continue;
        }
        let mut rays = tau.cone.rays().to_vec();
        rays.push(xp.clone());
        let piece = Cone::new(sigma.ambient_rank(), &rays)?;
        if sigma.minimal_face(&piece.barycenter()?)?.dim() == sigma.dim() {
            out.push(piece);
        }
    }
    Ok(out)
}

pub(crate) fn star_stage(x: &ConeComplex, center: &ComplexPoint, kind: StepKind) -> Result<Stage> {
    if center.point.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !x.is_stable_vector(center)? {
        return Err(Error::UnstableCenter(center.clone()));
    }
    let lifts = x.lifts(center)?;
    let pieces = par::try_map_range(x.len(), |s| chart_pieces(&x.cones()[s], lifts[s].as_ref()))?;

    let mut all: Vec<(ConeId, Cone)> =
        pieces.into_iter().enumerate().flat_map(|(s, ps)| ps.into_iter().map(move |p| (s, p))).collect();
    all.sort_by(|(s, a), (t, b)| {
        (a.dim(), a.ambient_rank(), a.rays(), s).cmp(&(b.dim(), b.ambient_rank(), b.rays(), t))
    });
    let index: HashMap<(ConeId, Vec<LatticeVector>), ConeId> =
        all.iter().enumerate().map(|(i, (s, c))| ((*s, c.rays().to_vec()), i)).collect();

    let maps = par::try_map_range(all.len(), |n| -> Result<Vec<FaceMap>> {
        let (sigma, piece) = &all[n];
        let chart = &x.cones()[*sigma];
        let mut out = Vec::new();
        for g in piece.faces() {
            let face = chart.minimal_face(&g.cone.barycenter()?)?;
            for m in x.morphisms_into(*sigma).filter(|m| m.image_rays() == face.cone.rays()) {
                let tau = &x.cones()[m.source()];
                let mut pre = Vec::with_capacity(g.cone.rays().len());
                for r in g.cone.rays() {
                    let u = m
                        .preimage(tau, r)?
                        .ok_or_else(|| Error::InvalidComplex(format!("ray {r} has no preimage under a face map")))?;
                    pre.push(u);
                }
                pre.sort();
                let src = *index.get(&(m.source(), pre)).ok_or_else(|| {
                    Error::InvalidComplex(format!("face of subdivided chart {sigma} has no preimage piece"))
                })?;
                if src != n || !m.matrix().is_identity() {
                    out.push(FaceMap { source: src, target: n, map: m.matrix().clone() });
                }
            }
        }
        Ok(out)
    })?;
    let maps: Vec<FaceMap> = maps.into_iter().flatten().collect();

    let parent = all
        .iter()
        .map(|(s, c)| Assignment { target: *s, map: IntegerMatrix::identity(c.ambient_rank()) })
        .collect();
    let new_ray_piece = lifts.iter().enumerate().find_map(|(s, l)| {
        let l = l.as_ref()?;
        let p = l.primitive().ok()?;
        let chart = &x.cones()[s];
        (chart.dim() > 1 && chart.relint_contains(l).ok()?).then(|| (index[&(s, vec![p.clone()])], p))
    });
    let cones: Vec<Cone> = all.into_iter().map(|(_, c)| c).collect();
    let complex = ConeComplex::from_diagram(cones, maps)?;
    let new_ray = match new_ray_piece {
        Some((id, p)) => Some(complex.canonical(&ComplexPoint { cone: id, point: p })?),
        None => None,
    };
    let affected_charts = lifts.iter().enumerate().filter(|(_, l)| l.is_some()).map(|(s, _)| s).collect();
    let multiplicities = maximal_multiplicities(&complex);
    Ok(Stage {
        step: StarStep { kind, center: center.clone(), affected_charts, new_ray, multiplicities },
        complex: Arc::new(complex),
        parent,
    })
}

/// Iterated star subdivision at barycenters, in decreasing dimension.
pub fn barycentric(x: &ConeComplex) -> Result<SubdivisionMap> {
    let mut f = SubdivisionMap::identity(x);
    barycentric_pass(&mut f)?;
    Ok(f)
}

pub(crate) fn barycentric_pass(f: &mut SubdivisionMap) -> Result<()> {
    let x = f.target().clone();
    for d in (2..=x.dim()).rev() {
        for sigma in (0..x.len()).filter(|&s| x.cones()[s].dim() == d) {
            let current = f
                .source()
                .cones()
                .iter()
                .enumerate()
                .find(|(c, cone)| f.assignment()[*c].target == sigma && cone.dim() == d);
            let Some((c, cone)) = current else { continue };
            let center = ComplexPoint { cone: c, point: cone.barycenter()? };
            let stage = star_stage(f.source(), &center, StepKind::Barycentric)?;
            f.push_stage(stage)?;
        }
    }
    Ok(())
}

/// Stars at barycenters of non-simplicial cones, smallest dimension first,
/// until every cone is simplicial.
pub fn simplicialize(f: &mut SubdivisionMap) -> Result<()> {
    loop {
        let next = f
            .source()
            .cones()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_simplicial())
            .min_by_key(|(id, c)| (c.dim(), *id))
            .map(|(id, c)| c.barycenter().map(|b| ComplexPoint { cone: id, point: b }));
        let Some(center) = next else { return Ok(()) };
        let stage = star_stage(f.source(), &center?, StepKind::Simplicial)?;
        f.push_stage(stage)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{fan, quadrant, swap_quadrant, v};
    use crate::subdivision::is_subdivision;

    fn maximal_rays(x: &ConeComplex) -> Vec<Vec<LatticeVector>> {
        let mut out: Vec<_> = x.maximal_cones().into_iter().map(|i| x.cones()[i].rays().to_vec()).collect();
        out.sort();
        out
    }

    #[test]
    fn blowup_of_quadrant() {
        let x = quadrant();
        let top = x.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let f = star_subdivide(&x, &ComplexPoint::new(top, [1, 1])).unwrap();
        assert_eq!(
            maximal_rays(f.source()),
            vec![vec![v(&[0, 1]), v(&[1, 1])], vec![v(&[1, 0]), v(&[1, 1])]]
        );
        let exc = f.exceptional_rays().unwrap();
        assert_eq!(exc.len(), 1);
        assert_eq!(f.source().rays().unwrap().orbits()[exc[0]].point, v(&[1, 1]));
        assert!(is_subdivision(&f).unwrap().ok);
    }

    #[test]
    fn star_of_multiplicity_two_cone() {
        let x = fan(2, &[&[&[1, 0], &[1, 2]]]);
        let top = x.maximal_cones()[0];
        let f = star_subdivide(&x, &ComplexPoint::new(top, [1, 1])).unwrap();
        let tops = f.source().maximal_cones();
        assert_eq!(tops.len(), 2);
        for t in tops {
            assert_eq!(f.source().cones()[t].multiplicity().unwrap(), 1);
        }
    }

    #[test]
    fn star_at_existing_ray() {
        let x = quadrant();
        let ray = x.cone_by_rays(&[v(&[1, 0])]).unwrap();
        let f = star_subdivide(&x, &ComplexPoint::new(ray, [1, 0])).unwrap();
        assert_eq!(f.source().canonical_form(), x.canonical_form());
        assert!(f.exceptional_rays().unwrap().is_empty());
        assert_eq!(f.history()[0].new_ray, None);
    }

    #[test]
    fn star_rejects_bad_centers() {
        let x = swap_quadrant();
        let ray = x.cone_by_rays(&[v(&[1, 0])]).unwrap();
        let top = x.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(matches!(
            star_subdivide(&x, &ComplexPoint::new(top, [1, 2])),
            Err(Error::UnstableCenter(_))
        ));
        assert_eq!(star_subdivide(&x, &ComplexPoint::new(ray, [0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn barycentric_counts_flags() {
        let x = quadrant();
        assert_eq!(barycentric(&x).unwrap().source().maximal_cones().len(), 2);
        let x = fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let f = barycentric(&x).unwrap();
        assert_eq!(f.source().maximal_cones().len(), 6);
        assert!(f.source().cones().iter().all(Cone::is_simplicial));
        assert!(is_subdivision(&f).unwrap().ok);
    }

    #[test]
    fn barycentric_of_swap_quadrant_is_stable() {
        let x = swap_quadrant();
        assert!(matches!(x.boundary_map(), Err(Error::UnstableRay(_))));
        let f = barycentric(&x).unwrap();
        let y = f.source();
        for p in y.points_up_to(4).unwrap().iter().filter(|p| !p.point.is_zero()) {
            assert!(y.is_stable_vector(p).unwrap(), "{p}");
        }
        assert!(y.boundary_map().is_ok());
        assert!(is_subdivision(&f).unwrap().ok);
    }

    #[test]
    fn simplicialize_square_cone() {
        let x = fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]]);
        let mut f = SubdivisionMap::identity(&x);
        simplicialize(&mut f).unwrap();
        assert!(f.source().cones().iter().all(Cone::is_simplicial));
        assert!(is_subdivision(&f).unwrap().ok);
    }
}
