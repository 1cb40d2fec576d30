use conefan::complex::{ComplexPoint, ConeComplex};
use conefan::contact::{band_in_cone, verify_bijection};
use conefan::subdivision::{ample_coefficients, is_relatively_ample, is_subdivision, resolve, star_subdivide};
use conefan::{Cone, IntegerMatrix, LatticeVector};
use proptest::prelude::*;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::from(c)
}

/// A strictly convex two-dimensional cone with primitive rays.
fn plane_cone() -> impl Strategy<Value = (LatticeVector, LatticeVector)> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_filter("independent", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| (v(&[a, b]).primitive().unwrap(), v(&[c, d]).primitive().unwrap()))
}

fn single(u: &LatticeVector, w: &LatticeVector) -> ConeComplex {
    ConeComplex::from_fan(2, &[vec![u.clone(), w.clone()]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn resolution_is_smooth_and_ample((u, w) in plane_cone()) {
        let x = single(&u, &w);
        let f = resolve(&x).unwrap();
        prop_assert!(is_subdivision(&f).unwrap().ok);
        prop_assert!(f.source().cones().iter().all(|c| c.dim() == 0 || c.is_smooth()));
        let m = ample_coefficients(&f).unwrap();
        prop_assert!(is_relatively_ample(&f, &m).unwrap());
        prop_assert_eq!(m.support(), f.exceptional_rays().unwrap());
    }

    #[test]
    fn star_preserves_points((u, w) in plane_cone(), s in 1i64..=3, t in 1i64..=3) {
        let x = single(&u, &w);
        let top = x.cone_by_rays(Cone::new(2, &[u.clone(), w.clone()]).unwrap().rays()).unwrap();
        let center = u.checked_scale(s).unwrap().checked_add(&w.checked_scale(t).unwrap()).unwrap();
        let f = star_subdivide(&x, &ComplexPoint::new(top, center)).unwrap();
        prop_assert!(is_subdivision(&f).unwrap().ok);
        prop_assert!(verify_bijection(&f, 3).unwrap().is_bijection());
        for p in f.source().points_up_to(3).unwrap() {
            prop_assert_eq!(f.push_forward(&p).unwrap().point, p.point);
        }
    }

    #[test]
    fn band_is_invariant_under_unimodular_change(
        (u, w) in plane_cone(), s in 0i64..=3, t in 0i64..=3, k in -3i64..=3,
    ) {
        let sigma = Cone::new(2, &[u.clone(), w.clone()]).unwrap();
        let phi = u.checked_scale(s).unwrap().checked_add(&w.checked_scale(t).unwrap()).unwrap();
        let g = IntegerMatrix::from_rows(&[vec![1, k], vec![0, 1]], 2).unwrap();
        let moved = Cone::new(2, &[g.apply(&u).unwrap(), g.apply(&w).unwrap()]).unwrap();
        prop_assert_eq!(
            band_in_cone(&sigma, &phi).unwrap(),
            band_in_cone(&moved, &g.apply(&phi).unwrap()).unwrap()
        );
    }
}

#[test]
fn band_scales_on_a_ray() {
    let sigma = Cone::new(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
    for k in 1..6 {
        assert_eq!(band_in_cone(&sigma, &v(&[k, 0])).unwrap(), k as u64);
    }
    assert_eq!(band_in_cone(&sigma, &v(&[2, 3])).unwrap(), 1);
}
