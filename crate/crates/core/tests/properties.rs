use proptest::prelude::*;

use carnot_core::carnot::{compose, inverse, source, target, unit, zoom, CarnotContext, GroupoidElement};
use carnot_core::filtration::levi_constants;
use carnot_core::nilpotent::{bch, dilate, law_k2, scaled_algebra, DegreeScaling, Graded3, GradedLieAlgebra};
use carnot_core::scalar::{format_rational, parse_rational, rat, Rational};
use carnot_core::specfile::bundled_filtration;

fn q() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(p, d)| rat(p, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=6).prop_map(|(p, d)| rat(p, d))
}

fn vec4() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(q(), 4)
}

fn engel() -> (CarnotContext, Vec<Rational>, GradedLieAlgebra<Rational>) {
    let spec = bundled_filtration("engel").unwrap();
    let a = spec.samples()[1].clone();
    let alg = levi_constants(&spec, &a).unwrap().algebra;
    (CarnotContext::new(spec), a, alg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_round_trips(x in q()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)), Some(x));
    }

    #[test]
    fn bch_is_a_group_law(x in vec4(), y in vec4(), z in vec4()) {
        let (_, _, alg) = engel();
        let left = bch(&alg, &bch(&alg, &x, &y).unwrap(), &z).unwrap();
        let right = bch(&alg, &x, &bch(&alg, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let neg: Vec<Rational> = x.iter().map(|c| -c.clone()).collect();
        prop_assert!(bch(&alg, &x, &neg).unwrap().iter().all(|c| *c == rat(0, 1)));
    }

    #[test]
    fn dilations_are_automorphisms(s in nonzero(), x in vec4(), y in vec4()) {
        let (_, _, alg) = engel();
        let d = |v: &[Rational]| dilate(alg.degrees(), &s, v).unwrap();
        prop_assert_eq!(d(&bch(&alg, &x, &y).unwrap()), bch(&alg, &d(&x), &d(&y)).unwrap());
    }

    #[test]
    fn step_three_law_matches_scaled_bch(t in q(), u in q(), x in vec4(), y in vec4()) {
        let (_, _, alg) = engel();
        let scaled = scaled_algebra(&alg, &DegreeScaling::two_parameter(3, t.clone(), u.clone())).unwrap();
        let g = Graded3::split(&alg, &x).unwrap();
        let h = Graded3::split(&alg, &y).unwrap();
        prop_assert_eq!(law_k2(&g, &h, &t, &u, &alg).unwrap().join(), bch(&scaled, &x, &y).unwrap());
    }

    #[test]
    fn zoom_is_an_action(s1 in nonzero(), s2 in nonzero(), xi in vec4(), eta in vec4(), x in vec4(), y in vec4(), t in nonzero()) {
        let (ctx, a, _) = engel();
        let osc = GroupoidElement::osc(&ctx, a.clone(), xi).unwrap();
        let osc2 = GroupoidElement::osc(&ctx, a, eta).unwrap();
        let pair = GroupoidElement::pair(x, y, t).unwrap();
        for e in [&osc, &pair] {
            let twice = zoom(&ctx, &s1, &zoom(&ctx, &s2, e).unwrap()).unwrap();
            prop_assert_eq!(twice, zoom(&ctx, &(s1.clone() * s2.clone()), e).unwrap());
        }
        let product = compose(&ctx, &osc, &osc2).unwrap();
        let zoomed = compose(&ctx, &zoom(&ctx, &s1, &osc).unwrap(), &zoom(&ctx, &s1, &osc2).unwrap()).unwrap();
        prop_assert_eq!(zoom(&ctx, &s1, &product).unwrap(), zoomed);
    }

    #[test]
    fn inverses_compose_to_units(xi in vec4(), x in vec4(), y in vec4(), t in nonzero()) {
        let (ctx, a, _) = engel();
        for e in [GroupoidElement::osc(&ctx, a.clone(), xi.clone()).unwrap(), GroupoidElement::pair(x.clone(), y.clone(), t.clone()).unwrap()] {
            let (p, time) = target(&e);
            let loop_ = compose(&ctx, &e, &inverse(&e)).unwrap();
            let expected = match &e {
                GroupoidElement::Osc { a, .. } => unit(a, &time),
                GroupoidElement::Pair { .. } => GroupoidElement::Pair { x: p.clone(), y: p, t: time },
            };
            prop_assert_eq!(loop_, expected);
            prop_assert_eq!(source(&inverse(&e)), target(&e));
        }
    }
}
