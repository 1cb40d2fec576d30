use super::*;
use crate::complex::tests::{fan, quadrant, v};

#[test]
fn identity_is_a_subdivision() {
    let x = fan(2, &[&[&[1, 0], &[1, 2]], &[&[1, 2], &[-1, 1]]]);
    let check = is_subdivision(&SubdivisionMap::identity(&x)).unwrap();
    assert!(check.ok, "{check:?}");
}

#[test]
fn dropping_a_cone_is_detected() {
    let x = quadrant();
    let top = x.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
    let f = star_subdivide(&x, &ComplexPoint::new(top, [1, 1])).unwrap();
    let dropped = f.source().cone_by_rays(&[v(&[1, 0]), v(&[1, 1])]).unwrap();
    let g = f.without_source_cones(&[dropped]).unwrap();
    let check = is_subdivision(&g).unwrap();
    assert!(!check.ok);
    let w = check.witness.unwrap();
    let c = f.source().cones()[dropped].clone();
    assert!(c.relint_contains(&w).unwrap() || !g.target().cones()[top].relint_contains(&w).unwrap());
}

#[test]
fn overlapping_images_are_detected() {
    let x = quadrant();
    let y = fan(2, &[&[&[1, 0], &[1, 1]]]);
    let z = ConeComplex::from_fan(2, &[vec![v(&[1, 0]), v(&[0, 1])]]).unwrap();
    let mut cones = y.cones().to_vec();
    cones.extend(z.cones().iter().cloned());
    let both = ConeComplex::from_diagram(cones, Vec::new()).unwrap();
    let f = SubdivisionMap::infer(both, x).unwrap();
    assert!(!is_subdivision(&f).unwrap().ok);
}

#[test]
fn composition_matches_direct_map() {
    let x = quadrant();
    let top = x.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
    let f = star_subdivide(&x, &ComplexPoint::new(top, [1, 1])).unwrap();
    let y = f.source().clone();
    let c = y.cone_by_rays(&[v(&[1, 0]), v(&[1, 1])]).unwrap();
    let g = star_subdivide(&y, &ComplexPoint::new(c, [2, 1])).unwrap();
    let h = f.then(&g).unwrap();
    assert_eq!(h.history().len(), 2);
    assert!(is_subdivision(&h).unwrap().ok);
    assert_eq!(h.exceptional_rays().unwrap().len(), 2);
    let inferred = SubdivisionMap::infer(h.source().clone(), x).unwrap();
    assert_eq!(inferred.assignment(), h.assignment());
}
