//! The two commuting ℝ*-actions on the step-2 deformation `(h, n, t)`.
//!
//! Two readings are provided. The `Displayed*` forms are
//! `λ¹_s(h,n,t) = (h/s, n/s, t/s)` and `λ⁰_s(h,n,t) = (h, n/s, ts)`; they are
//! multiplicative for the law `(h,n,t)·(h',n',t) = (h+h', n+n'+(t/2)ℒ(h,h'))`
//! only when `s² = 1`. The homomorphic forms are
//! `λ⁰_s(h,n,t) = (h/s, n/s, st)` and `λ¹_s(h,n,t) = (h, n/s, t/s)`; their
//! composite `λ¹_s λ⁰_s` is the graded dilation `δ_{1/s}` at fixed `t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nilpotent::{law_k1, LeviForm};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionForm {
    DisplayedLambda1,
    DisplayedLambda0,
    Lambda1,
    Lambda0,
}

impl ActionForm {
    pub const ALL: [ActionForm; 4] = [
        ActionForm::DisplayedLambda1,
        ActionForm::DisplayedLambda0,
        ActionForm::Lambda1,
        ActionForm::Lambda0,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            ActionForm::DisplayedLambda1 => "(h,n,t) -> (h/s, n/s, t/s)",
            ActionForm::DisplayedLambda0 => "(h,n,t) -> (h, n/s, t*s)",
            ActionForm::Lambda1 => "(h,n,t) -> (h, n/s, t/s)",
            ActionForm::Lambda0 => "(h,n,t) -> (h/s, n/s, s*t)",
        }
    }
}

/// A point `(h, n, t)` of the step-2 deformation.
#[derive(Debug, Clone, PartialEq)]
pub struct K1Point<S> {
    pub h: Vec<S>,
    pub n: Vec<S>,
    pub t: S,
}

pub fn apply_action<S: Scalar>(form: ActionForm, s: &S, p: &K1Point<S>) -> Result<K1Point<S>> {
    if s.is_zero() {
        return Err(Error::ZeroScaling);
    }
    let div = |v: &[S]| v.iter().map(|x| x.clone() / s.clone()).collect::<Vec<S>>();
    Ok(match form {
        ActionForm::DisplayedLambda1 => K1Point { h: div(&p.h), n: div(&p.n), t: p.t.clone() / s.clone() },
        ActionForm::DisplayedLambda0 => K1Point { h: p.h.clone(), n: div(&p.n), t: p.t.clone() * s.clone() },
        ActionForm::Lambda1 => K1Point { h: p.h.clone(), n: div(&p.n), t: p.t.clone() / s.clone() },
        ActionForm::Lambda0 => K1Point { h: div(&p.h), n: div(&p.n), t: s.clone() * p.t.clone() },
    })
}

/// Product of two points over the same `t`.
pub fn k1_product<S: Scalar>(levi: &LeviForm<S>, a: &K1Point<S>, b: &K1Point<S>) -> Result<K1Point<S>> {
    if a.t != b.t {
        return Err(Error::NotComposable("points lie over different t".into()));
    }
    let (h, n) = law_k1(&a.h, &a.n, &b.h, &b.n, &a.t, levi)?;
    Ok(K1Point { h, n, t: a.t.clone() })
}

/// Whether `λ_s(a·b) = λ_s(a)·λ_s(b)` on every supplied pair (exact for rationals).
pub fn is_multiplicative<S: Scalar>(
    levi: &LeviForm<S>,
    form: ActionForm,
    s: &S,
    pairs: &[(K1Point<S>, K1Point<S>)],
    tol: f64,
) -> Result<bool> {
    for (a, b) in pairs {
        let lhs = apply_action(form, s, &k1_product(levi, a, b)?)?;
        let rhs = k1_product(levi, &apply_action(form, s, a)?, &apply_action(form, s, b)?)?;
        let close = lhs.h.iter().chain(&lhs.n).chain(std::iter::once(&lhs.t))
            .zip(rhs.h.iter().chain(&rhs.n).chain(std::iter::once(&rhs.t)))
            .all(|(x, y)| (x.clone() - y.clone()).is_negligible(tol));
        if !close {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::examples;
    use crate::scalar::{int, rat, Rational};

    fn sample() -> Vec<(K1Point<Rational>, K1Point<Rational>)> {
        let t = rat(3, 2);
        vec![(
            K1Point { h: vec![int(1), int(0)], n: vec![rat(1, 3)], t: t.clone() },
            K1Point { h: vec![int(0), int(1)], n: vec![int(-2)], t },
        )]
    }

    #[test]
    fn displayed_forms_fail_at_two_corrected_pass() {
        let levi = LeviForm::from_algebra(&examples::heisenberg::<Rational>()).unwrap();
        let pairs = sample();
        let s = int(2);
        assert!(!is_multiplicative(&levi, ActionForm::DisplayedLambda0, &s, &pairs, 0.0).unwrap());
        assert!(!is_multiplicative(&levi, ActionForm::DisplayedLambda1, &s, &pairs, 0.0).unwrap());
        assert!(is_multiplicative(&levi, ActionForm::Lambda0, &s, &pairs, 0.0).unwrap());
        assert!(is_multiplicative(&levi, ActionForm::Lambda1, &s, &pairs, 0.0).unwrap());
        for form in ActionForm::ALL {
            assert!(is_multiplicative(&levi, form, &int(1), &pairs, 0.0).unwrap());
            assert!(is_multiplicative(&levi, form, &int(-1), &pairs, 0.0).unwrap());
        }
    }

    #[test]
    fn diagonal_is_inverse_dilation() {
        let s = rat(5, 3);
        let p = K1Point { h: vec![int(2), int(7)], n: vec![int(4)], t: rat(1, 9) };
        let q = apply_action(ActionForm::Lambda1, &s, &apply_action(ActionForm::Lambda0, &s, &p).unwrap()).unwrap();
        assert_eq!(q.t, p.t);
        assert_eq!(q.h, vec![int(2) / s.clone(), int(7) / s.clone()]);
        assert_eq!(q.n, vec![int(4) / (s.clone() * s)]);
    }
}
