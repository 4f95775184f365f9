use super::CarnotContext;
use crate::error::{Error, Result};
use crate::filtration::format_point;
use crate::nilpotent::{bch, dilate};
use crate::scalar::{convert_vec, Rational, Scalar};

/// Endpoints of float arrows must agree to this absolute tolerance to compose.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Arrow of the Carnot groupoid.
///
/// `Pair` lives over `t ≠ 0`; `Osc` is an element of the osculating group at
/// `a`, in exponential coordinates for the adapted frame at `a`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupoidElement<S> {
    Pair { x: Vec<S>, y: Vec<S>, t: S },
    Osc { a: Vec<Rational>, xi: Vec<S> },
}

impl<S: Scalar> GroupoidElement<S> {
    pub fn pair(x: Vec<S>, y: Vec<S>, t: S) -> Result<Self> {
        if t.is_negligible(0.0) {
            return Err(Error::OutOfRange("pair arrows need t ≠ 0".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        Ok(GroupoidElement::Pair { x, y, t })
    }

    pub fn osc(ctx: &CarnotContext, a: Vec<Rational>, xi: Vec<S>) -> Result<Self> {
        let dim = ctx.osculating(&a)?.algebra.dim();
        if xi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: xi.len() });
        }
        Ok(GroupoidElement::Osc { a, xi })
    }

    pub fn t(&self) -> S {
        match self {
            GroupoidElement::Pair { t, .. } => t.clone(),
            GroupoidElement::Osc { .. } => S::zero(),
        }
    }
}

pub fn source<S: Scalar>(e: &GroupoidElement<S>) -> (Vec<S>, S) {
    match e {
        GroupoidElement::Pair { y, t, .. } => (y.clone(), t.clone()),
        GroupoidElement::Osc { a, .. } => (convert_vec(a), S::zero()),
    }
}

pub fn target<S: Scalar>(e: &GroupoidElement<S>) -> (Vec<S>, S) {
    match e {
        GroupoidElement::Pair { x, t, .. } => (x.clone(), t.clone()),
        GroupoidElement::Osc { a, .. } => (convert_vec(a), S::zero()),
    }
}

fn same<S: Scalar>(p: &S, q: &S) -> bool {
    (p.clone() - q.clone()).is_negligible(ENDPOINT_TOL)
}

fn same_point<S: Scalar>(p: &[S], q: &[S]) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(a, b)| same(a, b))
}

/// `e₁ · e₂`, defined when `source(e₁) = target(e₂)`.
pub fn compose<S: Scalar>(ctx: &CarnotContext, e1: &GroupoidElement<S>, e2: &GroupoidElement<S>) -> Result<GroupoidElement<S>> {
    match (e1, e2) {
        (GroupoidElement::Pair { x, y, t }, GroupoidElement::Pair { x: y2, y: z, t: t2 }) => {
            if !same(t, t2) {
                return Err(Error::NotComposable(format!("t = {:?} against t = {:?}", t, t2)));
            }
            if !same_point(y, y2) {
                return Err(Error::NotComposable("source of the first arrow is not the target of the second".into()));
            }
            Ok(GroupoidElement::Pair { x: x.clone(), y: z.clone(), t: t.clone() })
        }
        (GroupoidElement::Osc { a, xi }, GroupoidElement::Osc { a: b, xi: eta }) => {
            if a != b {
                return Err(Error::NotComposable(format!("base points {} and {}", format_point(a), format_point(b))));
            }
            let alg = ctx.osculating(a)?.algebra.to_scalar::<S>();
            Ok(GroupoidElement::Osc { a: a.clone(), xi: bch(&alg, xi, eta)? })
        }
        _ => Err(Error::NotComposable("arrows lie over different strata".into())),
    }
}

pub fn inverse<S: Scalar>(e: &GroupoidElement<S>) -> GroupoidElement<S> {
    match e {
        GroupoidElement::Pair { x, y, t } => GroupoidElement::Pair { x: y.clone(), y: x.clone(), t: t.clone() },
        GroupoidElement::Osc { a, xi } => GroupoidElement::Osc { a: a.clone(), xi: xi.iter().map(|c| -c.clone()).collect() },
    }
}

/// Unit at `(a, t)`: the diagonal pair for `t ≠ 0`, the group identity at `t = 0`.
pub fn unit<S: Scalar>(a: &[Rational], t: &S) -> GroupoidElement<S> {
    if t.is_negligible(0.0) {
        GroupoidElement::Osc { a: a.to_vec(), xi: vec![S::zero(); a.len()] }
    } else {
        let p: Vec<S> = convert_vec(a);
        GroupoidElement::Pair { x: p.clone(), y: p, t: t.clone() }
    }
}

/// The `ℝ*` action: `t ↦ st` on pairs, `ξ ↦ δ_{1/s} ξ` on the osculating groups.
pub fn zoom<S: Scalar>(ctx: &CarnotContext, s: &S, e: &GroupoidElement<S>) -> Result<GroupoidElement<S>> {
    if s.is_negligible(0.0) {
        return Err(Error::ZeroScaling);
    }
    match e {
        GroupoidElement::Pair { x, y, t } => Ok(GroupoidElement::Pair { x: x.clone(), y: y.clone(), t: s.clone() * t.clone() }),
        GroupoidElement::Osc { a, xi } => {
            let weights = ctx.weights(a)?;
            Ok(GroupoidElement::Osc { a: a.clone(), xi: dilate(&weights, &(S::one() / s.clone()), xi)? })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::fixtures;
    use crate::scalar::{int, rat};

    fn heis() -> CarnotContext {
        CarnotContext::new(fixtures::heisenberg())
    }

    #[test]
    fn endpoints() {
        let e = GroupoidElement::pair(vec![int(1)], vec![int(2)], int(3)).unwrap();
        assert_eq!(source(&e), (vec![int(2)], int(3)));
        assert_eq!(target(&e), (vec![int(1)], int(3)));
        let o: GroupoidElement<Rational> = GroupoidElement::Osc { a: vec![int(0); 3], xi: vec![int(1); 3] };
        assert_eq!(source(&o), target(&o));
        assert!(GroupoidElement::pair(vec![int(1)], vec![int(2)], int(0)).is_err());
    }

    #[test]
    fn heisenberg_osc_product() {
        let ctx = heis();
        let a = vec![int(0); 3];
        let e1 = GroupoidElement::osc(&ctx, a.clone(), vec![int(1), int(0), int(0)]).unwrap();
        let e2 = GroupoidElement::osc(&ctx, a.clone(), vec![int(0), int(1), int(0)]).unwrap();
        assert_eq!(compose(&ctx, &e1, &e2).unwrap(), GroupoidElement::Osc { a, xi: vec![int(1), int(1), rat(1, 2)] });
    }

    #[test]
    fn strata_and_endpoints_must_match() {
        let ctx = heis();
        let p = GroupoidElement::pair(vec![int(0); 3], vec![int(1); 3], int(1)).unwrap();
        let o = unit(&vec![int(1); 3], &int(0));
        assert!(matches!(compose(&ctx, &p, &o), Err(Error::NotComposable(_))));
        let q = GroupoidElement::pair(vec![int(1); 3], vec![int(2); 3], int(2)).unwrap();
        assert!(compose(&ctx, &p, &q).is_err());
        let f = GroupoidElement::pair(vec![0.0; 3], vec![1.0; 3], 0.5).unwrap();
        let g = GroupoidElement::pair(vec![1.0 + 1e-14; 3], vec![2.0; 3], 0.5).unwrap();
        assert!(compose(&ctx, &f, &g).is_ok());
        let g = GroupoidElement::pair(vec![1.0 + 1e-9; 3], vec![2.0; 3], 0.5).unwrap();
        assert!(compose(&ctx, &f, &g).is_err());
    }

    #[test]
    fn inverse_and_unit() {
        let ctx = heis();
        let a = vec![int(1), rat(1, 2), int(0)];
        let o = GroupoidElement::osc(&ctx, a.clone(), vec![rat(2, 3), int(-1), rat(5, 7)]).unwrap();
        assert_eq!(compose(&ctx, &o, &inverse(&o)).unwrap(), unit(&a, &int(0)));
        assert_eq!(compose(&ctx, &unit(&a, &int(0)), &o).unwrap(), o);
        let p = GroupoidElement::pair(a.clone(), vec![int(3); 3], rat(1, 4)).unwrap();
        assert_eq!(compose(&ctx, &p, &inverse(&p)).unwrap(), unit(&a, &rat(1, 4)));
    }

    #[test]
    fn zoom_examples() {
        let ctx = heis();
        let a = vec![int(0); 3];
        let o = GroupoidElement::Osc { a: a.clone(), xi: vec![int(1); 3] };
        let s = int(3);
        assert_eq!(zoom(&ctx, &s, &o).unwrap(), GroupoidElement::Osc { a, xi: vec![rat(1, 3), rat(1, 3), rat(1, 9)] });
        assert_eq!(zoom(&ctx, &int(1), &o).unwrap(), o);
        assert_eq!(zoom(&ctx, &int(0), &o), Err(Error::ZeroScaling));
        let p = GroupoidElement::pair(vec![int(0); 3], vec![int(1); 3], int(2)).unwrap();
        assert_eq!(zoom(&ctx, &rat(1, 2), &p).unwrap().t(), int(1));
    }
}
