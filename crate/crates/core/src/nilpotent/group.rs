use crate::error::{Error, Result};
use crate::nilpotent::{bch, GradedLieAlgebra};
use crate::scalar::Scalar;

/// Element of the simply connected group of a graded algebra, in exponential
/// coordinates of the first kind.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<S> {
    coords: Vec<S>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(alg: &GradedLieAlgebra<S>, coords: Vec<S>) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(Error::AlgebraMismatch(format!(
                "element has {} coordinates, algebra has dimension {}",
                coords.len(),
                alg.dim()
            )));
        }
        Ok(GroupElement { coords })
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    fn check(&self, alg: &GradedLieAlgebra<S>) -> Result<()> {
        if self.coords.len() != alg.dim() {
            return Err(Error::AlgebraMismatch(format!(
                "element of dimension {} used with algebra of dimension {}",
                self.coords.len(),
                alg.dim()
            )));
        }
        Ok(())
    }
}

pub fn identity<S: Scalar>(alg: &GradedLieAlgebra<S>) -> GroupElement<S> {
    GroupElement { coords: vec![S::zero(); alg.dim()] }
}

pub fn group_mul<S: Scalar>(alg: &GradedLieAlgebra<S>, g: &GroupElement<S>, h: &GroupElement<S>) -> Result<GroupElement<S>> {
    g.check(alg)?;
    h.check(alg)?;
    Ok(GroupElement { coords: bch(alg, &g.coords, &h.coords)? })
}

pub fn group_inv<S: Scalar>(alg: &GradedLieAlgebra<S>, g: &GroupElement<S>) -> Result<GroupElement<S>> {
    g.check(alg)?;
    Ok(GroupElement { coords: g.coords.iter().map(|c| -c.clone()).collect() })
}

/// Graded dilation `δ_s`: the degree-`w` block is multiplied by `s^w`.
pub fn dilate<S: Scalar>(degrees: &[usize], s: &S, v: &[S]) -> Result<Vec<S>> {
    if s.is_zero() {
        return Err(Error::ZeroScaling);
    }
    if degrees.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: degrees.len(), found: v.len() });
    }
    Ok(v.iter()
        .zip(degrees)
        .map(|(x, &w)| x.clone() * s.powi(w as i32))
        .collect())
}

/// `δ_s` as a group automorphism.
pub fn dilation_automorphism<S: Scalar>(alg: &GradedLieAlgebra<S>, s: &S, g: &GroupElement<S>) -> Result<GroupElement<S>> {
    g.check(alg)?;
    Ok(GroupElement { coords: dilate(alg.degrees(), s, &g.coords)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::examples;
    use crate::scalar::{int, rat, Rational};

    #[test]
    fn unit_and_inverse() {
        let h = examples::heisenberg::<Rational>();
        let g = GroupElement::new(&h, vec![rat(2, 3), rat(-5, 7), rat(1, 9)]).unwrap();
        assert_eq!(group_mul(&h, &g, &identity(&h)).unwrap(), g);
        let inv = group_inv(&h, &g).unwrap();
        assert_eq!(group_mul(&h, &g, &inv).unwrap(), identity(&h));
    }

    #[test]
    fn engel_associativity_on_basis() {
        let e = examples::engel::<Rational>();
        let g: Vec<_> = (0..3).map(|i| GroupElement::new(&e, e.basis(i)).unwrap()).collect();
        let left = group_mul(&e, &group_mul(&e, &g[0], &g[1]).unwrap(), &g[2]).unwrap();
        let right = group_mul(&e, &g[0], &group_mul(&e, &g[1], &g[2]).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn dilation_is_automorphism() {
        let h = examples::heisenberg::<Rational>();
        let s = rat(3, 2);
        let e1 = GroupElement::new(&h, h.basis(0)).unwrap();
        let e2 = GroupElement::new(&h, h.basis(1)).unwrap();
        let prod = group_mul(&h, &e1, &e2).unwrap();
        let lhs = dilation_automorphism(&h, &s, &prod).unwrap();
        assert_eq!(lhs.coords(), &[s.clone(), s.clone(), s.clone() * s.clone() / int(2)]);
        let rhs = group_mul(
            &h,
            &dilation_automorphism(&h, &s, &e1).unwrap(),
            &dilation_automorphism(&h, &s, &e2).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        let back = dilation_automorphism(&h, &(int(1) / s.clone()), &lhs).unwrap();
        assert_eq!(back, prod);
        assert_eq!(dilation_automorphism(&h, &int(1), &prod).unwrap(), prod);
    }

    #[test]
    fn zero_scale_rejected() {
        let h = examples::heisenberg::<f64>();
        assert_eq!(dilation_automorphism(&h, &0.0, &identity(&h)), Err(Error::ZeroScaling));
    }

    #[test]
    fn mismatched_element() {
        let h = examples::heisenberg::<Rational>();
        assert!(matches!(GroupElement::new(&h, vec![int(1)]), Err(Error::AlgebraMismatch(_))));
    }
}
