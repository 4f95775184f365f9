use num_traits::Zero;

use super::TubularData;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Rational;
use crate::symexpr::Expr;

/// Class `(x, h, n)` of a curve in the weighted normal space over `V` with weight `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveClass {
    pub x: Vec<Rational>,
    pub h: Vec<Rational>,
    pub n: Vec<Rational>,
}

/// The chart curve `s ↦ φ(x, (s h, s² n))` as univariate polynomials.
pub fn chart_curve(tub: &TubularData, x: &[Rational], h: &[Rational], n: &[Rational]) -> Result<Vec<Expr>> {
    if n.len() != tub.fiber_dim() - tub.h() || h.len() != tub.h() {
        return Err(Error::DimensionMismatch { expected: tub.fiber_dim(), found: h.len() + n.len() });
    }
    if x.len() != tub.v() {
        return Err(Error::DimensionMismatch { expected: tub.v(), found: x.len() });
    }
    let s = Expr::var(1, 0);
    let s2 = s.mul(&s);
    let args: Vec<Expr> = x
        .iter()
        .map(|c| Expr::constant(1, c.clone()))
        .chain(h.iter().map(|c| s.scale(c)))
        .chain(n.iter().map(|c| s2.scale(c)))
        .collect();
    Ok(tub.phi().iter().map(|e| e.substitute(&args)).collect())
}

/// Reads off the class of a polynomial curve from its 2-jet in tubular coordinates.
///
/// With `g = φ⁻¹ ∘ f`, `g'(0) = Dφ⁻¹ f'(0)` and
/// `g''(0) = Dφ⁻¹ (f''(0) − D²φ[g'(0), g'(0)])` at `(f(0), 0)`; `h` is the `H`
/// block of `g'(0)` and `n` half the complementary block of `g''(0)`. Those are
/// the second derivatives along the curve of the complementary fiber
/// coordinates, which vanish on `V` and whose differentials vanish on `H`.
pub fn curve_class(curve: &[Expr], tub: &TubularData) -> Result<CurveClass> {
    let d = tub.dim();
    if curve.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: curve.len() });
    }
    if let Some(e) = curve.iter().find(|e| e.nvars() != 1) {
        return Err(Error::DimensionMismatch { expected: 1, found: e.nvars() });
    }
    let jet = |k: u32| -> Vec<Rational> { curve.iter().map(|e| e.univariate_coefficient(k)).collect() };
    let (c0, c1, c2) = (jet(0), jet(1), jet(2));
    let v = tub.v();
    if c0[v..].iter().any(|c| !c.is_zero()) {
        return Err(Error::CurveMembership("f(0) is not on V".into()));
    }
    let mut p0 = c0[..v].to_vec();
    p0.extend(vec![Rational::zero(); tub.fiber_dim()]);
    let j = tub.jacobian_at(&p0);
    let singular = || Error::InvalidTubular("phi is singular along V".into());
    let g1 = linalg::solve(&j, &c1, 0.0).ok_or_else(singular)?;
    if g1[v + tub.h()..].iter().any(|c| !c.is_zero()) {
        return Err(Error::CurveMembership("f'(0) is not in the weight-one subbundle".into()));
    }
    let q = tub.second_derivative(&p0, &g1)?;
    let two = Rational::from_integer(2.into());
    let rhs: Vec<Rational> = c2.iter().zip(&q).map(|(c, q)| two.clone() * c - q).collect();
    let g2 = linalg::solve(&j, &rhs, 0.0).ok_or_else(singular)?;
    Ok(CurveClass {
        x: c0[..v].to_vec(),
        h: g1[v..v + tub.h()].to_vec(),
        n: g2[v + tub.h()..].iter().map(|c| c / two.clone()).collect(),
    })
}

/// `s ↦ f(s/u)`: the zoom action on curves.
pub fn reparametrize(curve: &[Expr], u: &Rational) -> Result<Vec<Expr>> {
    if u.is_zero() {
        return Err(Error::ZeroScaling);
    }
    let arg = [Expr::var(1, 0).scale(&(Rational::from_integer(1.into()) / u.clone()))];
    Ok(curve.iter().map(|e| e.substitute(&arg)).collect())
}
