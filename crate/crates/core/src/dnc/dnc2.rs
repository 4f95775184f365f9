use serde::Serialize;

use super::TubularData;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Point of `dnc²(ℝᵈ, V, H × {0})` in one of its three strata.
#[derive(Debug, Clone, PartialEq)]
pub enum Dnc2Point<S> {
    /// `(m, τ, u)` with `τ, u ≠ 0`: a point of `ℝᵈ × ℝ* × ℝ*`.
    Off { m: Vec<S>, tau: S, u: S },
    /// `(x, X, 0, u)` with `u ≠ 0`: a normal vector over `V`, fiber coordinates.
    Normal { x: Vec<S>, normal: Vec<S>, u: S },
    /// `(x, h, n, t)` at `u = 0`: a point of the normal bundle of `H × {0}`.
    Zero { x: Vec<S>, h: Vec<S>, n: Vec<S>, t: S },
}

/// `(h, n, t, u) ↦ (φ(x, uth, u²tn), ut, u)` for `tu ≠ 0`,
/// `(x, (h, un), 0, u)` for `t = 0, u ≠ 0` and `(x, h, n, t)` for `u = 0`.
pub fn dnc2_chart<S: Scalar>(tub: &TubularData, x: &[S], h: &[S], n: &[S], t: &S, u: &S) -> Result<Dnc2Point<S>> {
    if h.len() != tub.h() {
        return Err(Error::DimensionMismatch { expected: tub.h(), found: h.len() });
    }
    if n.len() != tub.fiber_dim() - tub.h() {
        return Err(Error::DimensionMismatch { expected: tub.fiber_dim() - tub.h(), found: n.len() });
    }
    if x.len() != tub.v() {
        return Err(Error::DimensionMismatch { expected: tub.v(), found: x.len() });
    }
    if u.is_zero() {
        return Ok(Dnc2Point::Zero { x: x.to_vec(), h: h.to_vec(), n: n.to_vec(), t: t.clone() });
    }
    if t.is_zero() {
        let normal = h.iter().cloned().chain(n.iter().map(|c| u.clone() * c.clone())).collect();
        return Ok(Dnc2Point::Normal { x: x.to_vec(), normal, u: u.clone() });
    }
    let ut = u.clone() * t.clone();
    let uut = u.clone() * ut.clone();
    let y: Vec<S> = h
        .iter()
        .map(|c| ut.clone() * c.clone())
        .chain(n.iter().map(|c| uut.clone() * c.clone()))
        .collect();
    Ok(Dnc2Point::Off { m: tub.eval(x, &y)?, tau: ut, u: u.clone() })
}

/// `π^{(0,1)}` read in chart coordinates: `(τ/u, u)`, `(0, u)` or `(t, 0)`.
pub fn projection01<S: Scalar>(p: &Dnc2Point<S>) -> (S, S) {
    match p {
        Dnc2Point::Off { tau, u, .. } => (tau.clone() / u.clone(), u.clone()),
        Dnc2Point::Normal { u, .. } => (S::zero(), u.clone()),
        Dnc2Point::Zero { t, .. } => (t.clone(), S::zero()),
    }
}

fn div<S: Scalar>(v: &[S], s: &S) -> Vec<S> {
    v.iter().map(|c| c.clone() / s.clone()).collect()
}

/// Deformation action of the outer `dnc`: scales `u`, divides the normal data of `H × {0}`.
pub fn lambda1<S: Scalar>(s: &S, p: &Dnc2Point<S>) -> Result<Dnc2Point<S>> {
    if s.is_zero() {
        return Err(Error::ZeroScaling);
    }
    Ok(match p {
        Dnc2Point::Off { m, tau, u } => Dnc2Point::Off { m: m.clone(), tau: tau.clone(), u: s.clone() * u.clone() },
        Dnc2Point::Normal { x, normal, u } => Dnc2Point::Normal { x: x.clone(), normal: normal.clone(), u: s.clone() * u.clone() },
        Dnc2Point::Zero { x, h, n, t } => Dnc2Point::Zero { x: x.clone(), h: h.clone(), n: div(n, s), t: t.clone() / s.clone() },
    })
}

/// Action induced by the inner `dnc(ℝᵈ, V)` deformation action.
pub fn lambda0<S: Scalar>(s: &S, p: &Dnc2Point<S>) -> Result<Dnc2Point<S>> {
    if s.is_zero() {
        return Err(Error::ZeroScaling);
    }
    Ok(match p {
        Dnc2Point::Off { m, tau, u } => Dnc2Point::Off { m: m.clone(), tau: s.clone() * tau.clone(), u: u.clone() },
        Dnc2Point::Normal { x, normal, u } => Dnc2Point::Normal { x: x.clone(), normal: div(normal, s), u: u.clone() },
        Dnc2Point::Zero { x, h, n, t } => Dnc2Point::Zero { x: x.clone(), h: div(h, s), n: div(n, s), t: s.clone() * t.clone() },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub cases: usize,
    pub lambda1_failures: usize,
    pub lambda0_failures: usize,
    pub commute_failures: usize,
    pub diagonal_failures: usize,
    pub passed: bool,
}

/// Checks `π^{(0,1)}λ¹_s = (π⁰/s, sπ¹)` and `π^{(0,1)}λ⁰_s = (sπ⁰, π¹)` on every
/// stratum, that the actions commute, and that the diagonal `λ¹_s λ⁰_s` keeps
/// `{π⁰ = 1}` invariant. All arithmetic is exact.
pub fn lambda_relation_test(
    tub: &TubularData,
    x: &[Rational],
    h: &[Rational],
    n: &[Rational],
    t_grid: &[Rational],
    u_grid: &[Rational],
    s_grid: &[Rational],
) -> Result<RelationReport> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let mut report = RelationReport {
        cases: 0,
        lambda1_failures: 0,
        lambda0_failures: 0,
        commute_failures: 0,
        diagonal_failures: 0,
        passed: false,
    };
    let ts: Vec<&Rational> = t_grid.iter().chain(std::iter::once(&zero)).collect();
    let us: Vec<&Rational> = u_grid.iter().chain(std::iter::once(&zero)).collect();
    for &t in &ts {
        for &u in &us {
            let p = dnc2_chart(tub, x, h, n, t, u)?;
            let (p0, p1) = projection01(&p);
            for s in s_grid {
                report.cases += 1;
                let l1 = lambda1(s, &p)?;
                let l0 = lambda0(s, &p)?;
                if projection01(&l1) != (p0.clone() / s.clone(), s.clone() * p1.clone()) {
                    report.lambda1_failures += 1;
                }
                if projection01(&l0) != (s.clone() * p0.clone(), p1.clone()) {
                    report.lambda0_failures += 1;
                }
                if lambda1(s, &l0)? != lambda0(s, &l1)? {
                    report.commute_failures += 1;
                }
            }
        }
    }
    for u in u_grid.iter().chain(std::iter::once(&zero)) {
        let p = dnc2_chart(tub, x, h, n, &one, u)?;
        for s in s_grid {
            if projection01(&lambda1(s, &lambda0(s, &p)?)?).0 != one {
                report.diagonal_failures += 1;
            }
        }
    }
    report.passed = report.lambda1_failures == 0
        && report.lambda0_failures == 0
        && report.commute_failures == 0
        && report.diagonal_failures == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn chart_examples() {
        let tub = TubularData::identity(3, 1, 1).unwrap();
        let (x, h, n) = (vec![int(4)], vec![int(2)], vec![int(3)]);
        assert_eq!(
            dnc2_chart(&tub, &x, &h, &n, &int(1), &int(1)).unwrap(),
            Dnc2Point::Off { m: vec![int(4), int(2), int(3)], tau: int(1), u: int(1) }
        );
        assert_eq!(
            dnc2_chart(&tub, &x, &h, &n, &int(0), &int(2)).unwrap(),
            Dnc2Point::Normal { x: x.clone(), normal: vec![int(2), int(6)], u: int(2) }
        );
        assert_eq!(
            dnc2_chart(&tub, &x, &h, &n, &rat(1, 3), &int(0)).unwrap(),
            Dnc2Point::Zero { x: x.clone(), h: h.clone(), n: n.clone(), t: rat(1, 3) }
        );
    }

    #[test]
    fn projection_reads_chart_parameters() {
        let tub = TubularData::parse(3, 1, 1, &["x1", "y1 + y2^2", "y2"]).unwrap();
        for (t, u) in [(rat(1, 2), int(3)), (int(0), int(-2)), (int(5), int(0))] {
            let p = dnc2_chart(&tub, &[int(1)], &[int(1)], &[int(2)], &t, &u).unwrap();
            assert_eq!(projection01(&p), (t, u));
        }
    }

    #[test]
    fn diagonal_from_unit_point() {
        let tub = TubularData::identity(3, 1, 1).unwrap();
        let p = dnc2_chart(&tub, &[int(0)], &[int(1)], &[int(1)], &int(1), &int(1)).unwrap();
        let q = lambda1(&int(2), &lambda0(&int(2), &p).unwrap()).unwrap();
        assert_eq!(projection01(&q), (int(1), int(2)));
    }

    #[test]
    fn diagonal_on_zero_stratum_is_inverse_dilation() {
        let s = rat(3, 2);
        let p = Dnc2Point::Zero { x: vec![int(0)], h: vec![int(3)], n: vec![int(9)], t: int(1) };
        let q = lambda1(&s, &lambda0(&s, &p).unwrap()).unwrap();
        assert_eq!(q, Dnc2Point::Zero { x: vec![int(0)], h: vec![int(2)], n: vec![int(4)], t: int(1) });
    }

    #[test]
    fn relations_on_grid() {
        let tub = TubularData::parse(3, 1, 1, &["x1", "y1", "y2 + x1*y1^2"]).unwrap();
        let grid = [rat(-2, 1), rat(-1, 3), rat(1, 2), int(1), int(3)];
        let r = lambda_relation_test(&tub, &[rat(1, 2)], &[int(1)], &[rat(-1, 4)], &grid, &grid, &grid).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.cases, 6 * 6 * 5);
    }
}
