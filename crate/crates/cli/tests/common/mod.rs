//! Random complexes and fixtures shared by the integration tests.
#![allow(dead_code)]

use conefan::complex::{ComplexPoint, ConeComplex, FaceMap};
use conefan::{Cone, IntegerMatrix, LatticeVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::from(c)
}

pub fn fan(rank: usize, cones: &[&[&[i64]]]) -> ConeComplex {
    let cones: Vec<Vec<LatticeVector>> = cones.iter().map(|c| c.iter().map(|r| v(r)).collect()).collect();
    ConeComplex::from_fan(rank, &cones).unwrap()
}

pub fn at(x: &ConeComplex, rays: &[&[i64]], p: &[i64]) -> ComplexPoint {
    let rays: Vec<LatticeVector> = rays.iter().map(|r| v(r)).collect();
    let cone = Cone::new(p.len(), &rays).unwrap();
    ComplexPoint::new(x.cone_by_rays(cone.rays()).unwrap(), v(p))
}

pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn random_vector(rng: &mut ChaCha8Rng, rank: usize, lo: i64, hi: i64) -> LatticeVector {
    loop {
        let c: Vec<i64> = (0..rank).map(|_| rng.gen_range(lo..=hi)).collect();
        let w = LatticeVector::new(c);
        if !w.is_zero() {
            return w.primitive().unwrap();
        }
    }
}

/// A random full-dimensional cone with 2 to 4 generators (rank 3) or 2
/// (rank 2), coordinates in `[lo, hi]`.
pub fn random_cone(rng: &mut ChaCha8Rng, rank: usize, lo: i64, hi: i64) -> Cone {
    loop {
        let k = if rank <= 2 { rank } else { rng.gen_range(rank..=rank + 1) };
        let gens: Vec<LatticeVector> = (0..k).map(|_| random_vector(rng, rank, lo, hi)).collect();
        if let Ok(c) = Cone::new(rank, &gens) {
            if c.dim() == rank {
                return c;
            }
        }
    }
}

/// A random embedded fan: a cone and, sometimes, a second cone glued
/// along one of its facets from the other side.
pub fn random_fan(rng: &mut ChaCha8Rng, rank: usize) -> ConeComplex {
    loop {
        let sigma = random_cone(rng, rank, -2, 3);
        let mut cones = vec![sigma.rays().to_vec()];
        if rng.gen_bool(0.6) {
            let facets: Vec<_> = sigma.faces().iter().filter(|f| f.dim() + 1 == rank).collect();
            let facet = facets.choose(rng).unwrap();
            let normal = sigma
                .ambient_description()
                .unwrap()
                .1
                .into_iter()
                .find(|a| facet.cone.rays().iter().all(|r| a.dot(r).unwrap() == 0))
                .unwrap();
            let w = loop {
                let w = random_vector(rng, rank, -3, 3);
                if normal.dot(&w).unwrap() < 0 {
                    break w;
                }
            };
            let mut rays = facet.cone.rays().to_vec();
            rays.push(w);
            cones.push(rays);
        }
        if let Ok(x) = ConeComplex::from_fan(rank, &cones) {
            return x;
        }
    }
}

/// A random lattice point of a cone of `x`: a nonnegative combination of
/// its rays with small coefficients.
pub fn random_point(rng: &mut ChaCha8Rng, x: &ConeComplex) -> ComplexPoint {
    loop {
        let id = rng.gen_range(0..x.len());
        let c = &x.cones()[id];
        let mut p = LatticeVector::zero(c.ambient_rank());
        for r in c.rays() {
            p = p.checked_add(&r.checked_scale(rng.gen_range(0..=2)).unwrap()).unwrap();
        }
        if !p.is_zero() {
            return ComplexPoint { cone: id, point: p };
        }
    }
}

/// The quadrant with an automorphism exchanging its rays.
pub fn swap_quadrant() -> ConeComplex {
    with_automorphism(fan(2, &[&[&[1, 0], &[0, 1]]]), &[vec![0, 1], vec![1, 0]])
}

/// The positive octant with the cyclic permutation of its rays.
pub fn cyclic_octant() -> ConeComplex {
    with_automorphism(fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]), &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])
}

fn with_automorphism(x: ConeComplex, rows: &[Vec<i64>]) -> ConeComplex {
    let top = *x.maximal_cones().last().unwrap();
    let mut maps = x.generators().to_vec();
    maps.push(FaceMap { source: top, target: top, map: IntegerMatrix::from_rows(rows, rows.len()).unwrap() });
    ConeComplex::from_diagram(x.cones().to_vec(), maps).unwrap()
}

/// A random unimodular matrix and its inverse, as products of elementary
/// matrices.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut g = IntegerMatrix::identity(n);
    let mut inv = IntegerMatrix::identity(n);
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = *[-1i64, 1].choose(rng).unwrap();
        let mut e = IntegerMatrix::identity(n);
        e.set(i, j, k);
        let mut e_inv = IntegerMatrix::identity(n);
        e_inv.set(i, j, -k);
        g = e.checked_mul(&g).unwrap();
        inv = inv.checked_mul(&e_inv).unwrap();
    }
    (g, inv)
}

/// The same diagram after a change of lattice basis in every chart.
pub fn transform(x: &ConeComplex, g: &IntegerMatrix, inv: &IntegerMatrix) -> ConeComplex {
    let cones = x
        .cones()
        .iter()
        .map(|c| {
            let rays: Vec<LatticeVector> = c.rays().iter().map(|r| g.apply(r).unwrap()).collect();
            Cone::new(c.ambient_rank(), &rays).unwrap()
        })
        .collect();
    let maps = x
        .generators()
        .iter()
        .map(|m| FaceMap {
            source: m.source,
            target: m.target,
            map: g.checked_mul(&m.map).unwrap().checked_mul(inv).unwrap(),
        })
        .collect();
    ConeComplex::from_diagram(cones, maps).unwrap()
}
