use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SubdivisionMap;
use crate::complex::{ConeComplex, ConeId};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{solve_rational, to_i64, LatticeVector, LinearChart, Rational};

/// Integer coefficients on ray orbits. The support function takes the
/// value `-m` at the primitive generator of a ray with coefficient `m` and
/// is linear on each cone.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLDivisor {
    pub coefficients: BTreeMap<usize, i64>,
}

impl PLDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(ray: usize, m: i64) -> Self {
        let mut d = Self::default();
        d.set(ray, m);
        d
    }

    pub fn set(&mut self, ray: usize, m: i64) {
        if m == 0 {
            self.coefficients.remove(&ray);
        } else {
            self.coefficients.insert(ray, m);
        }
    }

    pub fn coefficient(&self, ray: usize) -> i64 {
        self.coefficients.get(&ray).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coefficients.keys().copied().collect()
    }
}

/// The linear functional on `cone` (in span coordinates) taking the given
/// values at its rays.
fn functional(cone: &Cone, values: &[Rational]) -> Result<Vec<Rational>> {
    let d = cone.dim();
    let a: Vec<Vec<Rational>> = cone
        .span_rays()
        .iter()
        .map(|r| r.coords().iter().map(|&c| Rational::from_integer(c as i128)).collect())
        .collect();
    let sol = solve_rational(&a, values, d)
        .ok_or_else(|| Error::IllPosed(format!("ray values on {:?} do not extend linearly", cone.rays())))?;
    Ok(sol)
}

fn evaluate(cone: &Cone, ell: &[Rational], w: &LatticeVector) -> Result<Rational> {
    let c = cone.span_coords(w)?.ok_or_else(|| Error::NotContained(w.coords().to_vec()))?;
    Ok(ell.iter().zip(c.coords()).fold(Rational::zero(), |acc, (l, &x)| acc + *l * Rational::from_integer(x as i128)))
}

/// Value of a piecewise-linear function, given by its values on ray orbits,
/// at a point of a cone.
fn evaluate_pl(x: &ConeComplex, ray_value: &dyn Fn(usize) -> Rational, cone: ConeId, w: &LatticeVector) -> Result<Rational> {
    let c = x.cone(cone)?;
    if c.dim() == 0 {
        return Ok(Rational::zero());
    }
    let values = c.rays().iter().map(|r| Ok(ray_value(x.ray_orbit(cone, r)?))).collect::<Result<Vec<_>>>()?;
    let ell = functional(c, &values)?;
    evaluate(c, &ell, w)
}

/// Pulls the support function of `d` back along `f` and reads off the
/// coefficients on the source rays.
pub fn pullback(f: &SubdivisionMap, d: &PLDivisor) -> Result<PLDivisor> {
    let x = f.target();
    let value = |ray: usize| Rational::from_integer(-(d.coefficient(ray) as i128));
    let mut out = PLDivisor::zero();
    for (id, rep) in f.source().rays()?.orbits().iter().enumerate() {
        let a = &f.assignment()[rep.cone];
        let w = a.map.apply(&rep.point)?;
        let psi = evaluate_pl(x, &value, a.target, &w)?;
        if !psi.is_integer() {
            return Err(Error::IllPosed(format!("support function is {psi} at ray {}", rep.point)));
        }
        out.set(id, -to_i64(psi.to_integer())?);
    }
    Ok(out)
}

/// Strict convexity of the support function of `d` across every wall of
/// the source lying in the interior of a target cone.
pub fn is_relatively_ample(f: &SubdivisionMap, d: &PLDivisor) -> Result<bool> {
    let y = f.source();
    for (id, c) in y.cones().iter().enumerate() {
        if c.dim() > 0 && !c.is_smooth() {
            return Err(Error::NotSmooth(id));
        }
    }
    let psi = |cone: ConeId, r: &LatticeVector| -> Result<Rational> {
        Ok(Rational::from_integer(-(d.coefficient(y.ray_orbit(cone, r)?) as i128)))
    };
    let x = f.target();
    for (sigma, tc) in x.cones().iter().enumerate() {
        let dim = tc.dim();
        if dim < 2 {
            continue;
        }
        let over: Vec<ConeId> = (0..y.len()).filter(|&c| f.assignment()[c].target == sigma).collect();
        for &wall in over.iter().filter(|&&c| y.cones()[c].dim() + 1 == dim) {
            let sides: Vec<_> = y
                .morphisms_out_of(wall)
                .filter(|m| f.assignment()[m.target()].target == sigma && y.cones()[m.target()].dim() == dim)
                .collect();
            if sides.len() != 2 {
                return Err(Error::IllPosed(format!("wall {wall} lies on {} maximal cones", sides.len())));
            }
            for (a, b) in [(sides[0], sides[1]), (sides[1], sides[0])] {
                let cb = &y.cones()[b.target()];
                let far = cb
                    .rays()
                    .iter()
                    .find(|r| !b.image_rays().contains(r))
                    .expect("a wall misses one ray of a simplicial cone");
                let u = f.assignment()[b.target()].map.apply(far)?;
                let ca = &y.cones()[a.target()];
                let ma = &f.assignment()[a.target()].map;
                let images = ca.rays().iter().map(|r| ma.apply(r)).collect::<Result<Vec<_>>>()?;
                let chart = LinearChart::new(&images, tc.ambient_rank())?;
                let coords = chart
                    .rational_coords(&u)?
                    .ok_or_else(|| Error::IllPosed("neighbouring cones span different spaces".into()))?;
                let mut psi_a = Rational::zero();
                for (r, q) in ca.rays().iter().zip(coords) {
                    psi_a += psi(a.target(), r)? * q;
                }
                if psi_a <= psi(b.target(), far)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub const DEFAULT_BASE: i128 = 2;
const MAX_BASE: i128 = 1 << 20;

/// Negative coefficients on the exceptional rays whose support function is
/// relatively ample, built from the anti-ample exceptional divisors of the
/// individual star steps. The base is doubled until the result verifies.
pub fn ample_coefficients(f: &SubdivisionMap) -> Result<PLDivisor> {
    let mut base = DEFAULT_BASE;
    let mut last = None;
    while base <= MAX_BASE {
        match ample_coefficients_with_base(f, base) {
            Err(Error::NoCertificate(msg)) => last = Some(msg),
            other => return other,
        }
        base *= 2;
    }
    Err(Error::NoCertificate(last.unwrap_or_default()))
}

/// As [`ample_coefficients`] with a fixed base: step `k` of `n` exceptional
/// steps gets weight `base^(n-1-k)`.
pub fn ample_coefficients_with_base(f: &SubdivisionMap, base: i128) -> Result<PLDivisor> {
    let y = f.source();
    let stages = f.stages();
    let exceptional: Vec<usize> = (0..stages.len()).filter(|&k| stages[k].step.new_ray.is_some()).collect();
    let n = exceptional.len();
    let mut weight = vec![Rational::zero(); stages.len()];
    for (j, &k) in exceptional.iter().enumerate() {
        let w = base
            .checked_pow((n - 1 - j) as u32)
            .ok_or_else(|| Error::NoCertificate(format!("weights overflow at base {base}")))?;
        weight[k] = Rational::from_integer(w);
    }
    let orbits = y.rays()?.orbits().to_vec();
    let mut totals = Vec::with_capacity(orbits.len());
    for rep in &orbits {
        let (mut cone, mut point) = (rep.cone, rep.point.clone());
        let mut total = Rational::zero();
        for k in (0..stages.len()).rev() {
            let stage = &stages[k];
            if let Some(e) = &stage.step.new_ray {
                let yk = &stage.complex;
                let e_id = yk.rays()?.id_of(e).expect("new ray is a ray orbit");
                let indicator = |r: usize| if r == e_id { Rational::one() } else { Rational::zero() };
                total += weight[k] * evaluate_pl(yk, &indicator, cone, &point)?;
            }
            let p = &stage.parent[cone];
            point = p.map.apply(&point)?;
            cone = p.target;
        }
        totals.push(total);
    }
    let den = totals.iter().fold(1i128, |l, q| l.lcm(q.denom()));
    let mut m = PLDivisor::zero();
    for (id, t) in totals.iter().enumerate() {
        let scaled = *t * Rational::from_integer(den);
        m.set(id, -to_i64(scaled.to_integer())?);
    }
    let exc = f.exceptional_rays()?;
    for id in 0..orbits.len() {
        let c = m.coefficient(id);
        let is_exc = exc.contains(&id);
        if (is_exc && c >= 0) || (!is_exc && c != 0) {
            return Err(Error::NoCertificate(format!("ray orbit {id} gets coefficient {c} at base {base}")));
        }
    }
    if !is_relatively_ample(f, &m)? {
        return Err(Error::NoCertificate(format!("not relatively ample at base {base}")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{fan, quadrant, v};
    use crate::complex::ComplexPoint;
    use crate::subdivision::{resolve, star_subdivide};

    fn blowup() -> (SubdivisionMap, usize) {
        let x = quadrant();
        let top = x.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let f = star_subdivide(&x, &ComplexPoint::new(top, [1, 1])).unwrap();
        let e = f.exceptional_rays().unwrap()[0];
        (f, e)
    }

    #[test]
    fn pullback_examples() {
        let x = quadrant();
        let id = SubdivisionMap::identity(&x);
        let d = PLDivisor::single(0, 3);
        assert_eq!(pullback(&id, &d).unwrap(), d);
        assert!(pullback(&id, &PLDivisor::zero()).unwrap().is_zero());

        let (f, e) = blowup();
        let e1 = x.ray_orbit(x.cone_by_rays(&[v(&[1, 0])]).unwrap(), &v(&[1, 0])).unwrap();
        let pulled = pullback(&f, &PLDivisor::single(e1, 1)).unwrap();
        let y = f.source();
        let e1_y = y.ray_orbit(y.cone_by_rays(&[v(&[1, 0])]).unwrap(), &v(&[1, 0])).unwrap();
        assert_eq!(pulled.coefficient(e1_y), 1);
        assert_eq!(pulled.coefficient(e), 1);
        assert_eq!(pulled.coefficients.len(), 2);
    }

    #[test]
    fn blowup_ampleness() {
        let (f, e) = blowup();
        assert!(is_relatively_ample(&f, &PLDivisor::single(e, -1)).unwrap());
        assert!(!is_relatively_ample(&f, &PLDivisor::single(e, 1)).unwrap());
        assert_eq!(ample_coefficients(&f).unwrap(), PLDivisor::single(e, -1));
    }

    #[test]
    fn ample_coefficients_after_resolution() {
        let x = fan(2, &[&[&[1, 0], &[1, 3]]]);
        let f = resolve(&x).unwrap();
        let m = ample_coefficients(&f).unwrap();
        let exc = f.exceptional_rays().unwrap();
        assert_eq!(m.support(), exc);
        assert!(m.coefficients.values().all(|&c| c < 0));
        assert!(is_relatively_ample(&f, &m).unwrap());
    }

    #[test]
    fn non_smooth_source_is_rejected() {
        let x = fan(2, &[&[&[1, 0], &[1, 2]]]);
        let f = SubdivisionMap::identity(&x);
        assert!(matches!(is_relatively_ample(&f, &PLDivisor::zero()), Err(Error::NotSmooth(_))));
    }
}
