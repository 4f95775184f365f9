use num_traits::Zero;
use serde::Serialize;

use super::TubularData;
use crate::convergence::{OrderStudy, MIN_ORDER};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg;
use crate::scalar::{Rational, Scalar};
use crate::symexpr::Expr;

/// Point of `dnc(ℝᵈ, V)`: an off-fiber point `(m, t)` or a normal vector over `V` at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum DncPoint<S> {
    Off { m: Vec<S>, t: S },
    Fiber { x: Vec<S>, normal: Vec<S> },
}

impl<S: Scalar> DncPoint<S> {
    pub fn t(&self) -> S {
        match self {
            DncPoint::Off { t, .. } => t.clone(),
            DncPoint::Fiber { .. } => S::zero(),
        }
    }

    /// `λ_u(m, t) = (m, ut)`, `λ_u(x, X, 0) = (x, X/u, 0)`.
    pub fn act(&self, u: &S) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroScaling);
        }
        Ok(match self {
            DncPoint::Off { m, t } => DncPoint::Off { m: m.clone(), t: u.clone() * t.clone() },
            DncPoint::Fiber { x, normal } => DncPoint::Fiber {
                x: x.clone(),
                normal: normal.iter().map(|c| c.clone() / u.clone()).collect(),
            },
        })
    }
}

/// `φ̃(x, X, t) = (φ(x, tX), t)` for `t ≠ 0` and `(x, X, 0)` at `t = 0`.
pub fn dnc_chart<S: Scalar>(tub: &TubularData, x: &[S], normal: &[S], t: &S) -> Result<DncPoint<S>> {
    if t.is_zero() {
        tub.join(x, normal)?;
        return Ok(DncPoint::Fiber { x: x.to_vec(), normal: normal.to_vec() });
    }
    let y: Vec<S> = normal.iter().map(|c| t.clone() * c.clone()).collect();
    Ok(DncPoint::Off { m: tub.eval(x, &y)?, t: t.clone() })
}

/// Chart coordinates `(x, X)` of a point of `dnc(ℝᵈ, V)`.
pub fn dnc_chart_inverse(tub: &TubularData, p: &DncPoint<Rational>) -> Result<(Vec<Rational>, Vec<Rational>)> {
    match p {
        DncPoint::Fiber { x, normal } => Ok((x.clone(), normal.clone())),
        DncPoint::Off { m, t } => {
            let (x, y) = tub.inverse(m)?;
            Ok((x, y.into_iter().map(|c| c / t.clone()).collect()))
        }
    }
}

/// A probe `(x, X)`: base point on `V` and normal vector in fiber coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub x: Vec<Rational>,
    pub normal: Vec<Rational>,
}

impl Probe {
    pub fn new(x: Vec<Rational>, normal: Vec<Rational>) -> Self {
        Probe { x, normal }
    }
}

/// Per-probe error tables against `t` and the combined verdict.
#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub probes: Vec<OrderStudy>,
    pub min_slope: Option<f64>,
    pub max_err: f64,
    pub exact: bool,
    pub passed: bool,
}

impl LimitReport {
    fn from_studies(probes: Vec<OrderStudy>) -> Self {
        let min_slope = probes.iter().filter(|s| !s.exact).filter_map(|s| s.slope).reduce(f64::min);
        let max_err = probes.iter().map(|s| s.max_err).fold(0.0, f64::max);
        let exact = probes.iter().all(|s| s.exact);
        let passed = probes.iter().all(|s| s.passes(MIN_ORDER));
        LimitReport { probes, min_slope, max_err, exact, passed }
    }
}

fn dist(a: &[Rational], b: &[Rational]) -> f64 {
    let d: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    linalg::dot(&d, &d).to_f64().sqrt()
}

/// Dyadic parameters `2^-first, …, 2^-last` as exact rationals.
pub fn dyadic_rationals(first: u32, last: u32) -> Vec<Rational> {
    (first..=last).map(|k| Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k))).collect()
}

fn study<F>(ts: &[Rational], err: F) -> Result<OrderStudy>
where
    F: Fn(&Rational) -> Result<f64>,
{
    let errs = ts.iter().map(&err).collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = ts.iter().map(Scalar::to_f64).collect();
    Ok(OrderStudy::new(&hs, &errs))
}

/// `dnc(f)` for a polynomial `f` vanishing on `V`.
#[derive(Debug, Clone)]
pub struct DncFunction<'a> {
    tub: &'a TubularData,
    f: Expr,
    grad: Vec<Expr>,
}

/// Builds `dnc(f)`; `f` is a polynomial in the ambient coordinates.
pub fn dnc_smooth_fn<'a>(tub: &'a TubularData, f: &Expr) -> Result<DncFunction<'a>> {
    let d = tub.dim();
    if f.nvars() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.nvars() });
    }
    let mask: Vec<bool> = (0..d).map(|i| i >= tub.v()).collect();
    if !f.restrict_zero(&mask).is_zero() {
        return Err(Error::NotVanishingOnV);
    }
    let grad = (0..d).map(|i| f.diff(i)).collect::<Result<Vec<_>>>()?;
    Ok(DncFunction { tub, f: f.clone(), grad })
}

impl DncFunction<'_> {
    /// `f(m)/t` off the fiber, `df_x(X)` on it.
    pub fn eval<S: Scalar>(&self, p: &DncPoint<S>) -> Result<S> {
        match p {
            DncPoint::Off { m, t } => {
                if m.len() != self.tub.dim() {
                    return Err(Error::DimensionMismatch { expected: self.tub.dim(), found: m.len() });
                }
                Ok(self.f.eval(m) / t.clone())
            }
            DncPoint::Fiber { x, normal } => {
                let w = self.tub.push_fiber(x, normal)?;
                let base = self.tub.join(x, &vec![S::zero(); self.tub.fiber_dim()])?;
                let g: Vec<S> = self.grad.iter().map(|e| e.eval(&base)).collect();
                Ok(linalg::dot(&g, &w))
            }
        }
    }

    /// `|dnc(f)(φ̃(x, X, t)) − dnc(f)(x, X, 0)|` over the `t` grid, per probe.
    pub fn limit_test(&self, probes: &[Probe], ts: &[Rational], exec: Exec) -> Result<LimitReport> {
        let studies = exec.map(probes, |p| {
            let limit = self.eval(&DncPoint::Fiber { x: p.x.clone(), normal: p.normal.clone() })?;
            study(ts, |t| {
                let v = self.eval(&dnc_chart(self.tub, &p.x, &p.normal, t)?)?;
                Ok((v - limit.clone()).to_f64().abs())
            })
        });
        Ok(LimitReport::from_studies(studies.into_iter().collect::<Result<_>>()?))
    }
}

/// `ψ_t = φ̃₂⁻¹ ∘ φ̃₁` against its limit `(x, B₂⁻¹B₁X)` as `t → 0`.
///
/// `B` is the normal block of each tubular; for identical data `ψ_t` is the
/// identity and for linear data it is already the limit at every `t`.
pub fn chart_transition_test(
    tub1: &TubularData,
    tub2: &TubularData,
    probes: &[Probe],
    ts: &[Rational],
    exec: Exec,
) -> Result<LimitReport> {
    if (tub1.dim(), tub1.v()) != (tub2.dim(), tub2.v()) {
        return Err(Error::InvalidTubular("transition needs tubular data over the same (d, v)".into()));
    }
    let studies = exec.map(probes, |p| {
        let pushed = linalg::mat_vec(tub1.normal_block(), &p.normal);
        let mut limit = p.x.clone();
        limit.extend(tub2.normal_coordinates(&[p.x.clone(), pushed].concat())?);
        study(ts, |t| {
            let (x, y) = dnc_chart_inverse(tub2, &dnc_chart(tub1, &p.x, &p.normal, t)?)?;
            Ok(dist(&[x, y].concat(), &limit))
        })
    });
    Ok(LimitReport::from_studies(studies.into_iter().collect::<Result<_>>()?))
}

/// `dnc(f): dnc(ℝᵈ, V) → dnc(ℝ^{d'}, V')` for a polynomial map with `f(V) ⊆ V'`.
#[derive(Debug, Clone)]
pub struct DncMap<'a> {
    f: Vec<Expr>,
    jac: Vec<Vec<Expr>>,
    source: &'a TubularData,
    target: &'a TubularData,
}

pub fn dnc_map<'a>(f: &[Expr], source: &'a TubularData, target: &'a TubularData) -> Result<DncMap<'a>> {
    let d = source.dim();
    if f.len() != target.dim() {
        return Err(Error::DimensionMismatch { expected: target.dim(), found: f.len() });
    }
    if let Some(e) = f.iter().find(|e| e.nvars() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: e.nvars() });
    }
    let mask: Vec<bool> = (0..d).map(|i| i >= source.v()).collect();
    if f[target.v()..].iter().any(|e| !e.restrict_zero(&mask).is_zero()) {
        return Err(Error::MapLeavesSubmanifold);
    }
    let jac = f
        .iter()
        .map(|e| (0..d).map(|j| e.diff(j)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(DncMap { f: f.to_vec(), jac, source, target })
}

impl DncMap<'_> {
    /// `(m, t) ↦ (f(m), t)`; `(x, X, 0) ↦ (f(x), [df_x X], 0)` in target fiber coordinates.
    pub fn apply(&self, p: &DncPoint<Rational>) -> Result<DncPoint<Rational>> {
        match p {
            DncPoint::Off { m, t } => Ok(DncPoint::Off { m: self.f.iter().map(|e| e.eval(m)).collect(), t: t.clone() }),
            DncPoint::Fiber { x, normal } => {
                let base = self.source.join(x, &vec![Rational::zero(); self.source.fiber_dim()])?;
                let w = self.source.push_fiber(x, normal)?;
                let df: Vec<Vec<Rational>> = self.jac.iter().map(|r| r.iter().map(|e| e.eval(&base)).collect()).collect();
                let image = linalg::mat_vec(&df, &w);
                let fx: Vec<Rational> = self.f.iter().map(|e| e.eval(&base)).collect();
                Ok(DncPoint::Fiber {
                    x: fx[..self.target.v()].to_vec(),
                    normal: self.target.normal_coordinates(&image)?,
                })
            }
        }
    }

    /// Chart coordinates of `dnc(f)(φ̃(x, X, t))` against their `t = 0` value.
    pub fn continuity_test(&self, probes: &[Probe], ts: &[Rational], exec: Exec) -> Result<LimitReport> {
        let studies = exec.map(probes, |p| {
            let (lx, ln) = match self.apply(&DncPoint::Fiber { x: p.x.clone(), normal: p.normal.clone() })? {
                DncPoint::Fiber { x, normal } => (x, normal),
                DncPoint::Off { .. } => unreachable!("fiber points map to fiber points"),
            };
            let limit = [lx, ln].concat();
            study(ts, |t| {
                let image = self.apply(&dnc_chart(self.source, &p.x, &p.normal, t)?)?;
                let (x, y) = dnc_chart_inverse(self.target, &image)?;
                Ok(dist(&[x, y].concat(), &limit))
            })
        });
        Ok(LimitReport::from_studies(studies.into_iter().collect::<Result<_>>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn coords2() -> crate::symexpr::Coordinates {
        TubularData::coordinates(2, 1)
    }

    fn probes() -> Vec<Probe> {
        vec![
            Probe::new(vec![int(2)], vec![int(1)]),
            Probe::new(vec![rat(-1, 3)], vec![rat(3, 2)]),
            Probe::new(vec![int(0)], vec![int(-2)]),
        ]
    }

    #[test]
    fn chart_examples() {
        let tub = TubularData::identity(3, 1, 1).unwrap();
        let x = vec![int(5)];
        let n = vec![int(2), int(-4)];
        assert_eq!(
            dnc_chart(&tub, &x, &n, &int(1)).unwrap(),
            DncPoint::Off { m: vec![int(5), int(2), int(-4)], t: int(1) }
        );
        assert_eq!(
            dnc_chart(&tub, &x, &n, &rat(1, 2)).unwrap(),
            DncPoint::Off { m: vec![int(5), int(1), int(-2)], t: rat(1, 2) }
        );
        assert_eq!(dnc_chart(&tub, &x, &n, &int(0)).unwrap(), DncPoint::Fiber { x: x.clone(), normal: n.clone() });
    }

    #[test]
    fn chart_is_equivariant() {
        let tub = TubularData::parse(2, 1, 0, &["x1", "y1 + x1*y1^2"]).unwrap();
        let (x, n) = (vec![rat(1, 2)], vec![rat(-3, 5)]);
        for t in [int(0), rat(1, 3), int(2)] {
            for u in [rat(1, 2), int(-3)] {
                let lhs = dnc_chart(&tub, &x, &[n[0].clone() / u.clone()], &(u.clone() * t.clone())).unwrap();
                let rhs = dnc_chart(&tub, &x, &n, &t).unwrap().act(&u).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn smooth_fn_examples() {
        let tub = TubularData::identity(2, 1, 0).unwrap();
        let c = coords2();
        let ts = dyadic_rationals(3, 10);

        let linear = dnc_smooth_fn(&tub, &c.parse("y1").unwrap()).unwrap();
        for t in &ts {
            let v = linear.eval(&dnc_chart(&tub, &[int(2)], &[int(3)], t).unwrap()).unwrap();
            assert_eq!(v, int(3));
        }
        assert!(linear.limit_test(&probes(), &ts, Exec::Sequential).unwrap().exact);

        let square = dnc_smooth_fn(&tub, &c.parse("y1^2").unwrap()).unwrap();
        assert_eq!(square.eval(&DncPoint::Fiber { x: vec![int(1)], normal: vec![int(7)] }).unwrap(), int(0));
        let r = square.limit_test(&probes(), &ts, Exec::Sequential).unwrap();
        assert!(r.passed && (r.min_slope.unwrap() - 1.0).abs() < 1e-9);

        let mixed = dnc_smooth_fn(&tub, &c.parse("x1*y1").unwrap()).unwrap();
        let lim = mixed.eval(&DncPoint::Fiber { x: vec![int(2)], normal: vec![rat(5, 3)] }).unwrap();
        assert_eq!(lim, rat(10, 3));
    }

    #[test]
    fn mixed_function_through_curved_tubular() {
        let tub = TubularData::parse(2, 1, 0, &["x1 + y1^2", "y1 + x1*y1^2"]).unwrap();
        let f = dnc_smooth_fn(&tub, &coords2().parse("x1*y1").unwrap()).unwrap();
        let r = f.limit_test(&probes(), &dyadic_rationals(3, 10), Exec::Parallel).unwrap();
        assert!(r.passed && !r.exact, "{r:?}");
    }

    #[test]
    fn rejects_function_not_vanishing_on_v() {
        let tub = TubularData::identity(2, 1, 0).unwrap();
        assert_eq!(dnc_smooth_fn(&tub, &coords2().parse("x1 + y1").unwrap()).unwrap_err(), Error::NotVanishingOnV);
    }

    #[test]
    fn transitions() {
        let id = TubularData::identity(2, 1, 0).unwrap();
        let ts = dyadic_rationals(3, 10);
        let same = chart_transition_test(&id, &id, &probes(), &ts, Exec::Sequential).unwrap();
        assert!(same.exact && same.max_err == 0.0);

        let bent = TubularData::parse(2, 1, 0, &["x1", "y1 + x1*y1^2"]).unwrap();
        let r = chart_transition_test(&id, &bent, &probes(), &ts, Exec::Sequential).unwrap();
        assert!(r.passed && r.min_slope.unwrap() > 0.9, "{r:?}");

        let a = TubularData::linear(3, 1, 0, &[vec![int(2), int(1)], vec![int(1), int(1)]]).unwrap();
        let id3 = TubularData::identity(3, 1, 0).unwrap();
        let p = vec![Probe::new(vec![int(1)], vec![int(3), int(-1)])];
        let r = chart_transition_test(&id3, &a, &p, &ts, Exec::Sequential).unwrap();
        assert_eq!(r.max_err, 0.0);
        // A⁻¹ (3, −1) = (4, −5)
        let (_, y) = dnc_chart_inverse(&a, &dnc_chart(&id3, &p[0].x, &p[0].normal, &rat(1, 4)).unwrap()).unwrap();
        assert_eq!(y, vec![int(4), int(-5)]);
    }

    #[test]
    fn maps() {
        let id = TubularData::identity(2, 1, 0).unwrap();
        let c = coords2();
        let ts = dyadic_rationals(3, 10);
        let identity = dnc_map(&[c.parse("x1").unwrap(), c.parse("y1").unwrap()], &id, &id).unwrap();
        let p = dnc_chart(&id, &[int(1)], &[int(2)], &rat(1, 8)).unwrap();
        assert_eq!(identity.apply(&p).unwrap(), p);

        let diag = dnc_map(&[c.parse("2*x1").unwrap(), c.parse("3*y1").unwrap()], &id, &id).unwrap();
        assert!(diag.continuity_test(&probes(), &ts, Exec::Sequential).unwrap().exact);
        // the fiber part is exact, the base drifts by tX
        let lin = dnc_map(&[c.parse("2*x1 + y1").unwrap(), c.parse("3*y1").unwrap()], &id, &id).unwrap();
        let r = lin.continuity_test(&probes(), &ts, Exec::Sequential).unwrap();
        assert!(r.passed && !r.exact);
        let (_, y) = dnc_chart_inverse(&id, &lin.apply(&dnc_chart(&id, &[int(1)], &[int(2)], &rat(1, 4)).unwrap()).unwrap()).unwrap();
        assert_eq!(y, vec![int(6)]);
        let fib = lin.apply(&DncPoint::Fiber { x: vec![int(1)], normal: vec![int(2)] }).unwrap();
        assert_eq!(fib, DncPoint::Fiber { x: vec![int(2)], normal: vec![int(6)] });

        let quad = dnc_map(&[c.parse("x1").unwrap(), c.parse("y1 + y1^2").unwrap()], &id, &id).unwrap();
        let fib = quad.apply(&DncPoint::Fiber { x: vec![int(1)], normal: vec![int(2)] }).unwrap();
        assert_eq!(fib, DncPoint::Fiber { x: vec![int(1)], normal: vec![int(2)] });
        let r = quad.continuity_test(&probes(), &ts, Exec::Sequential).unwrap();
        assert!(r.passed && !r.exact);

        assert_eq!(
            dnc_map(&[c.parse("x1").unwrap(), c.parse("y1 + 1").unwrap()], &id, &id).unwrap_err(),
            Error::MapLeavesSubmanifold
        );
    }
}
