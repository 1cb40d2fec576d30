use super::star::{barycentric_pass, check_valid, simplicialize, star_stage};
use super::{maximal_multiplicities, StepKind, SubdivisionMap};
use crate::complex::{ComplexPoint, ConeComplex};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BarycentricPass {
    /// Skip the pass when the input is already monodromy free, so that
    /// every vector is stable to begin with.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub barycentric: BarycentricPass,
    pub max_steps: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { barycentric: BarycentricPass::Auto, max_steps: 10_000 }
    }
}

pub fn resolve(x: &ConeComplex) -> Result<SubdivisionMap> {
    resolve_with(x, &ResolveOptions::default())
}

/// Subdivides `x` until every cone is smooth and the boundary labeling
/// exists: optional barycentric pass, then barycenters of non-simplicial
/// cones, then repeated stars at Hilbert basis elements of a cone of
/// largest multiplicity.
pub fn resolve_with(x: &ConeComplex, opts: &ResolveOptions) -> Result<SubdivisionMap> {
    let mut f = SubdivisionMap::identity(x);
    let run_pass = match opts.barycentric {
        BarycentricPass::Always => true,
        BarycentricPass::Never => false,
        BarycentricPass::Auto => !x.is_monodromy_free(),
    };
    if run_pass {
        barycentric_pass(&mut f)?;
    }
    simplicialize(&mut f)?;
    let mut steps = 0;
    loop {
        let y = f.source();
        let mut worst: Option<(u64, usize)> = None;
        for (id, c) in y.cones().iter().enumerate() {
            let m = c.multiplicity()?;
            if m > 1 && worst.is_none_or(|(w, _)| m > w) {
                worst = Some((m, id));
            }
        }
        let Some((_, chart)) = worst else { break };
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::ResourceCap(format!("resolution did not finish in {} steps", opts.max_steps)));
        }
        let cone = &y.cones()[chart];
        let candidates: Vec<LatticeVector> =
            cone.hilbert_basis()?.into_iter().filter(|h| cone.ray_index(h).is_none()).collect();
        let stages = par::try_map(&candidates, |h| {
            star_stage(y, &ComplexPoint { cone: chart, point: h.clone() }, StepKind::Resolution)
        })?;
        let best = stages
            .into_iter()
            .zip(&candidates)
            .min_by(|(a, u), (b, w)| (a.step.multiplicities.first(), *u).cmp(&(b.step.multiplicities.first(), *w)))
            .map(|(s, _)| s)
            .ok_or_else(|| Error::InvalidComplex(format!("cone {chart} is singular but has no interior Hilbert basis element")))?;
        f.push_stage(best)?;
    }
    check_valid(f.source())?;
    f.source().boundary_map()?;
    Ok(f)
}

/// Multiplicity traces of the resolution steps, for monotonicity checks.
pub fn multiplicity_trace(f: &SubdivisionMap) -> Vec<Vec<u64>> {
    let mut out = vec![maximal_multiplicities(f.target())];
    out.extend(f.stages().iter().map(|s| s.step.multiplicities.clone()));
    out
}
