//! The Carnot deformation groupoid of a filtration: pair arrows `(x, y, t)`
//! for `t ≠ 0` glued to the osculating groups at `t = 0`.

mod groupoid;
mod rescaled;

pub use groupoid::{compose, inverse, source, target, unit, zoom, GroupoidElement, ENDPOINT_TOL};
pub use rescaled::{convergence_study, osculating_limit, rescaled_product, ConvergenceReport, Orientation, FINAL_ERR_TOL, STALL_TOL};

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::filtration::{levi_constants, FiltrationSpec, Osculating};
use crate::newton::NewtonOptions;
use crate::nilpotent::{bch, scaled_algebra, DegreeScaling, GradedLieAlgebra};
use crate::scalar::Rational;

/// A filtration together with its per-point osculating data, computed once per base point.
#[derive(Debug)]
pub struct CarnotContext {
    spec: FiltrationSpec,
    cache: RwLock<BTreeMap<Vec<Rational>, Arc<Osculating>>>,
    flow_steps: usize,
    newton: NewtonOptions,
}

impl CarnotContext {
    pub fn new(spec: FiltrationSpec) -> Self {
        let flow_steps = spec.tolerances().flow_steps;
        let newton = NewtonOptions { tol: spec.tolerances().newton, max_iter: 60, ..NewtonOptions::default() };
        CarnotContext { spec, cache: RwLock::new(BTreeMap::new()), flow_steps, newton }
    }

    pub fn with_flow_steps(mut self, steps: usize) -> Self {
        self.flow_steps = steps;
        self
    }

    pub fn spec(&self) -> &FiltrationSpec {
        &self.spec
    }

    pub fn flow_steps(&self) -> usize {
        self.flow_steps
    }

    pub fn newton_options(&self) -> NewtonOptions {
        self.newton
    }

    /// Adapted frame and osculating algebra at `a`, cached per point.
    pub fn osculating(&self, a: &[Rational]) -> Result<Arc<Osculating>> {
        if let Some(hit) = self.cache.read().expect("cache lock").get(a) {
            return Ok(Arc::clone(hit));
        }
        let fresh = Arc::new(levi_constants(&self.spec, a)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(a.to_vec()).or_insert(fresh)))
    }

    pub fn algebra(&self, a: &[Rational]) -> Result<GradedLieAlgebra<Rational>> {
        Ok(self.osculating(a)?.algebra.clone())
    }

    pub fn weights(&self, a: &[Rational]) -> Result<Vec<usize>> {
        Ok(self.osculating(a)?.frame.weights().to_vec())
    }

    pub fn cached_points(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// Group law at `a` with the brackets landing in degree `m` scaled by `τ_m`.
#[derive(Debug, Clone)]
pub struct MultiparameterLaw {
    pub algebra: GradedLieAlgebra<Rational>,
}

impl MultiparameterLaw {
    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        bch(&self.algebra, x, y)
    }
}

pub fn multiparameter_law(ctx: &CarnotContext, a: &[Rational], scaling: &DegreeScaling<Rational>) -> Result<MultiparameterLaw> {
    let alg = ctx.algebra(a)?;
    let algebra = scaled_algebra(&alg, scaling)?;
    // reject oversized steps up front rather than on the first product
    bch(&algebra, &vec![Rational::from_integer(0.into()); algebra.dim()], &vec![Rational::from_integer(0.into()); algebra.dim()])?;
    Ok(MultiparameterLaw { algebra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::fixtures;
    use crate::nilpotent::{law_k2, Graded3};
    use crate::scalar::{int, rat};

    #[test]
    fn cache_is_filled_once_per_point() {
        let ctx = CarnotContext::new(fixtures::heisenberg());
        let a = vec![int(1), int(2), int(-1)];
        let first = ctx.osculating(&a).unwrap();
        let second = ctx.osculating(&a).unwrap();
        assert!(Arc::ptr_eq(&first, &second));
        assert_eq!(ctx.cached_points(), 1);
    }

    #[test]
    fn specialisations() {
        let ctx = CarnotContext::new(fixtures::engel());
        let a = vec![int(0); 4];
        let e1 = vec![int(1), int(0), int(0), int(0)];
        let e2 = vec![int(0), int(1), int(0), int(0)];

        let ones = multiparameter_law(&ctx, &a, &DegreeScaling::uniform(3, int(1))).unwrap();
        assert_eq!(ones.product(&e1, &e2).unwrap(), bch(&ctx.algebra(&a).unwrap(), &e1, &e2).unwrap());

        let zeros = multiparameter_law(&ctx, &a, &DegreeScaling::uniform(3, int(0))).unwrap();
        assert_eq!(zeros.product(&e1, &e2).unwrap(), vec![int(1), int(1), int(0), int(0)]);

        let (t, u) = (rat(2, 3), rat(-5, 7));
        let law = multiparameter_law(&ctx, &a, &DegreeScaling::two_parameter(3, t.clone(), u.clone())).unwrap();
        let alg = ctx.algebra(&a).unwrap();
        let h = Graded3::split(&alg, &e1).unwrap();
        let k = Graded3::split(&alg, &e2).unwrap();
        assert_eq!(law.product(&e1, &e2).unwrap(), law_k2(&h, &k, &t, &u, &alg).unwrap().join());
    }
}
