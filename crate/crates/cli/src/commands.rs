use std::path::{Path, PathBuf};

use serde_json::json;

use carnot_core::carnot::{convergence_study, CarnotContext, Orientation};
use carnot_core::dnc::{
    chart_curve, chart_transition_test, curve_class, dnc_smooth_fn, dyadic_rationals, lambda_relation_test, CurveClass,
    Probe, TubularData,
};
use carnot_core::exec::Exec;
use carnot_core::filtration::{check_filtration_at, format_point, levi_constants, random_points, FiltrationSpec, Osculating};
use carnot_core::nilpotent::{
    apply_action, bch, is_multiplicative, law_k1, law_k2, scaled_algebra, ActionForm, DegreeScaling, Graded3,
    GradedLieAlgebra, K1Point, LeviForm,
};
use carnot_core::scalar::{format_rational, parse_rational, Rational, Scalar};
use carnot_core::specfile::{bundled, SpecFile};
use carnot_core::Error;

use crate::report::{Check, InputError, Report};

const JACOBI_TOL: f64 = 1e-9;
const RANDOM_PAIRS: usize = 20;

struct Loaded {
    text: String,
    file: SpecFile,
    spec: FiltrationSpec,
}

fn load(arg: &str) -> Result<Loaded, InputError> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path)?
    } else if let Some(t) = bundled(arg) {
        t.to_string()
    } else {
        return Err(InputError(format!("no spec file or bundled spec named `{arg}`")));
    };
    let file = SpecFile::from_json(&text)?;
    let spec = file.filtration()?;
    Ok(Loaded { text, file, spec })
}

fn sample(spec: &FiltrationSpec, index: usize) -> Result<Vec<Rational>, InputError> {
    spec.samples()
        .get(index)
        .cloned()
        .ok_or_else(|| InputError(format!("--point {index} out of range ({} samples)", spec.samples().len())))
}

fn rational(text: &str, flag: &str) -> Result<Rational, InputError> {
    parse_rational(text).ok_or_else(|| InputError(format!("{flag}: `{text}` is not a rational number")))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Osculating data at a sample, or a failed report explaining why there is none.
fn osculating(l: &Loaded, command: &str, index: usize) -> Result<Result<Osculating, Report>, InputError> {
    let a = sample(&l.spec, index)?;
    Ok(levi_constants(&l.spec, &a).map_err(|e| {
        let check = Check::new("osculating_algebra", false, json!({ "point": format_point(&a), "error": e.to_string() }));
        Report::new(command, &l.text, vec![check])
    }))
}

fn algebra_checks(alg: &GradedLieAlgebra<Rational>) -> Vec<Check> {
    let anti = alg.antisymmetry_residual();
    let jac = alg.jacobi_residual();
    vec![
        Check::new("antisymmetry", anti == 0.0, json!({})).residual(anti),
        Check::new("jacobi", jac <= JACOBI_TOL, json!({ "tolerance": JACOBI_TOL })).residual(jac),
        Check::new("graded", alg.is_graded(), json!({ "degrees": alg.degrees() })),
    ]
}

pub fn validate(arg: &str, random: usize, seed: u64) -> Result<Report, InputError> {
    let l = load(arg)?;
    let mut points = l.spec.samples().to_vec();
    points.extend(random_points(l.spec.dim(), random, seed));
    let tol = l.spec.tolerances().bracket;
    let checks = match check_filtration_at(&l.spec, &points, tol, Exec::Parallel) {
        Ok(r) => {
            let violations: Vec<_> = r.violations().cloned().collect();
            let mut checks = vec![
                Check::new("ranks", true, json!({ "points": r.points, "ranks": r.ranks })),
                Check::new("brackets", r.passed, json!({ "checked": r.brackets.len(), "tolerance": tol, "violations": violations }))
                    .residual(r.max_residual()),
            ];
            let mut failures = Vec::new();
            for a in l.spec.samples() {
                match levi_constants(&l.spec, a) {
                    Ok(osc) if osc.algebra.jacobi_residual() <= JACOBI_TOL && osc.algebra.antisymmetry_residual() == 0.0 => {}
                    Ok(_) => failures.push(json!({ "point": format_point(a), "error": "Jacobi or antisymmetry fails" })),
                    Err(e) => failures.push(json!({ "point": format_point(a), "error": e.to_string() })),
                }
            }
            checks.push(Check::new("osculating_algebras", failures.is_empty(), json!({ "failures": failures })));
            checks
        }
        Err(Error::RankDeficiency(msg)) => vec![Check::new("ranks", false, json!({ "error": msg }))],
        Err(e) => return Err(e.into()),
    };
    Ok(Report::new("validate", &l.text, checks))
}

pub fn levi(arg: &str, index: usize) -> Result<Report, InputError> {
    let l = load(arg)?;
    let osc = match osculating(&l, "levi", index)? {
        Ok(o) => o,
        Err(report) => return Ok(report),
    };
    let alg = &osc.algebra;
    let mut checks = vec![Check::new(
        "structure_constants",
        true,
        json!({
            "point": format_point(osc.frame.base()),
            "weights": osc.frame.weights(),
            "frame_sources": osc.frame.source_indices(),
            "constants": alg.constant_table(),
        }),
    )];
    checks.extend(algebra_checks(alg));
    Ok(Report::new("levi", &l.text, checks))
}

fn scaling(step: usize, t: &Rational, u: &Rational) -> DegreeScaling<Rational> {
    match step {
        0 | 1 => DegreeScaling::new(Vec::new()),
        2 => DegreeScaling::new(vec![t.clone()]),
        _ => DegreeScaling::two_parameter(step, t.clone(), u.clone()),
    }
}

pub fn bch_table(arg: &str, index: usize, t: &str, u: &str, seed: u64) -> Result<Report, InputError> {
    let (t, u) = (rational(t, "--t")?, rational(u, "--u")?);
    let l = load(arg)?;
    let osc = match osculating(&l, "bch-table", index)? {
        Ok(o) => o,
        Err(report) => return Ok(report),
    };
    let alg = &osc.algebra;
    let d = alg.dim();
    let scaled = scaled_algebra(alg, &scaling(alg.step(), &t, &u))?;

    let mut rows = Vec::new();
    let mut products = Ok(());
    for i in 0..d {
        for j in (i + 1)..d {
            match bch(&scaled, &alg.basis(i), &alg.basis(j)) {
                Ok(p) => rows.push(json!({ "i": i, "j": j, "product": strings(&p) })),
                Err(e) => products = Err(e.to_string()),
            }
        }
    }
    let mut checks = vec![Check::new(
        "products",
        products.is_ok(),
        json!({ "t": format_rational(&t), "u": format_rational(&u), "step": alg.step(), "table": rows, "error": products.err() }),
    )];

    let mut pairs: Vec<(Vec<Rational>, Vec<Rational>)> =
        (0..d).flat_map(|i| ((i + 1)..d).map(move |j| (i, j))).map(|(i, j)| (alg.basis(i), alg.basis(j))).collect();
    let random = random_points(d, 2 * RANDOM_PAIRS, seed);
    pairs.extend(random.chunks(2).map(|c| (c[0].clone(), c[1].clone())));
    let closed_form = |g: &[Rational], h: &[Rational]| -> carnot_core::Result<Option<Vec<Rational>>> {
        match alg.step() {
            2 => {
                let levi = LeviForm::from_algebra(alg)?;
                let k = levi.h_dim();
                let (hh, nn) = law_k1(&g[..k], &g[k..], &h[..k], &h[k..], &t, &levi)?;
                Ok(Some([hh, nn].concat()))
            }
            3 => Ok(Some(law_k2(&Graded3::split(alg, g)?, &Graded3::split(alg, h)?, &t, &u, alg)?.join())),
            _ => Ok(None),
        }
    };
    if matches!(alg.step(), 2 | 3) {
        let mut mismatches = 0;
        for (g, h) in &pairs {
            let lhs = closed_form(g, h)?;
            if lhs != Some(bch(&scaled, g, h)?) {
                mismatches += 1;
            }
        }
        let law = if alg.step() == 2 { "step-2 closed form" } else { "step-3 closed form" };
        checks.push(Check::new("closed_form", mismatches == 0, json!({ "law": law, "pairs": pairs.len(), "mismatches": mismatches })));
    }
    Ok(Report::new("bch-table", &l.text, checks))
}

pub struct ConvergeOptions {
    pub point: usize,
    pub xi: Option<String>,
    pub eta: Option<String>,
    pub u_grid: String,
    pub csv: Option<PathBuf>,
    pub target_based: bool,
}

fn vector(text: Option<&str>, dim: usize, default: usize, flag: &str) -> Result<Vec<f64>, InputError> {
    match text {
        None => Ok((0..dim).map(|i| if i == default.min(dim - 1) { 1.0 } else { 0.0 }).collect()),
        Some(s) => {
            let v = s.split(',').map(|c| rational(c, flag).map(|q| q.to_f64())).collect::<Result<Vec<_>, _>>()?;
            if v.len() != dim {
                return Err(InputError(format!("{flag} needs {dim} comma-separated entries, got {}", v.len())));
            }
            Ok(v)
        }
    }
}

/// `first:last:count`, geometrically spaced.
pub fn u_grid(text: &str) -> Result<Vec<f64>, InputError> {
    let bad = || InputError(format!("--u-grid `{text}` is not first:last:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let (a, b) = (rational(a, "--u-grid")?.to_f64(), rational(b, "--u-grid")?.to_f64());
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n < 2 || !(a > 0.0 && a <= 0.5 && b > 0.0 && b <= 0.5) {
        return Err(InputError("--u-grid needs at least two points inside (0, 1/2]".into()));
    }
    Ok((0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64)).collect())
}

pub fn converge(arg: &str, opts: &ConvergeOptions) -> Result<Report, InputError> {
    let us = u_grid(&opts.u_grid)?;
    let l = load(arg)?;
    let d = l.spec.dim();
    let xi = vector(opts.xi.as_deref(), d, 0, "--xi")?;
    let eta = vector(opts.eta.as_deref(), d, 1, "--eta")?;
    let a = sample(&l.spec, opts.point)?;
    let orientation = if opts.target_based { Orientation::TargetBased } else { Orientation::SourceBased };
    let ctx = CarnotContext::new(l.spec.clone());
    let check = match convergence_study(&ctx, &a, &xi, &eta, &us, orientation, Exec::Parallel) {
        Ok(r) => {
            if let Some(path) = &opts.csv {
                std::fs::write(path, r.to_csv())?;
            }
            Check::new(
                "convergence",
                r.passed,
                json!({ "point": format_point(&a), "orientation": r.orientation, "limit": r.limit, "rows": r.study.rows, "exact": r.study.exact }),
            )
            .residual(r.study.final_err())
            .order(r.study.slope)
        }
        Err(e) => Check::new("convergence", false, json!({ "point": format_point(&a), "error": e.to_string() })),
    };
    Ok(Report::new("converge", &l.text, vec![check]))
}

pub fn actions(arg: &str, index: usize, seed: u64) -> Result<Report, InputError> {
    let l = load(arg)?;
    let osc = match osculating(&l, "actions", index)? {
        Ok(o) => o,
        Err(report) => return Ok(report),
    };
    let levi = LeviForm::from_algebra(&osc.algebra).map_err(|e| InputError(format!("actions need a step-2 osculating algebra: {e}")))?;
    let (hd, nd) = (levi.h_dim(), levi.n_dim());
    let raw = random_points(2 * (hd + nd) + 1, RANDOM_PAIRS, seed);
    let pairs: Vec<(K1Point<Rational>, K1Point<Rational>)> = raw
        .iter()
        .map(|p| {
            let t = if p[0] == Rational::from_integer(0.into()) { Rational::from_integer(1.into()) } else { p[0].clone() };
            let point = |off: usize| K1Point { h: p[off..off + hd].to_vec(), n: p[off + hd..off + hd + nd].to_vec(), t: t.clone() };
            (point(1), point(1 + hd + nd))
        })
        .collect();
    let scales = ["2", "1/3", "1", "-1"].map(|s| parse_rational(s).expect("literal"));
    let levi_vanishes = pairs.iter().try_fold(true, |acc, (a, b)| {
        Ok::<_, Error>(acc && levi.eval(&a.h, &b.h)?.iter().all(|c| *c == Rational::from_integer(0.into())))
    })?;

    let mut verdicts = Vec::new();
    let mut homomorphic = [true, true];
    let mut displayed_as_predicted = true;
    for form in ActionForm::ALL {
        for s in &scales {
            let ok = is_multiplicative(&levi, form, s, &pairs, 0.0)?;
            verdicts.push(json!({ "form": form, "formula": form.formula(), "s": format_rational(s), "multiplicative": ok }));
            match form {
                ActionForm::Lambda1 => homomorphic[0] &= ok,
                ActionForm::Lambda0 => homomorphic[1] &= ok,
                _ => {
                    let predicted = levi_vanishes || s.clone() * s.clone() == Rational::from_integer(1.into());
                    displayed_as_predicted &= ok == predicted;
                }
            }
        }
    }
    let s = &scales[0];
    let p = &pairs[0].0;
    let diagonal = apply_action(ActionForm::Lambda1, s, &apply_action(ActionForm::Lambda0, s, p)?)?;

    let tub = TubularData::identity(1 + hd + nd, 1, hd)?;
    let grid = |v: [&str; 5]| v.map(|s| parse_rational(s).expect("literal")).to_vec();
    let relations = lambda_relation_test(
        &tub,
        &[Rational::new(1.into(), 2.into())],
        &p.h,
        &p.n,
        &grid(["1", "-1/2", "3/4", "2", "-5/3"]),
        &grid(["1", "1/3", "-2", "7/5", "-1/4"]),
        &grid(["1", "2", "-1/3", "5/2", "-3/7"]),
    )?;
    let checks = vec![
        Check::new("lambda1_homomorphic", homomorphic[0], json!({ "formula": ActionForm::Lambda1.formula() })),
        Check::new("lambda0_homomorphic", homomorphic[1], json!({ "formula": ActionForm::Lambda0.formula() })),
        Check::new(
            "displayed_forms",
            displayed_as_predicted,
            json!({ "prediction": "multiplicative only when s^2 = 1 or the Levi form vanishes on the sample", "verdicts": verdicts }),
        ),
        Check::new(
            "diagonal_is_inverse_dilation",
            diagonal
                == K1Point {
                    h: p.h.iter().map(|c| c / s.clone()).collect(),
                    n: p.n.iter().map(|c| c / (s.clone() * s.clone())).collect(),
                    t: p.t.clone(),
                },
            json!({ "s": format_rational(s), "h": strings(&diagonal.h), "n": strings(&diagonal.n), "t": format_rational(&diagonal.t) }),
        ),
        Check::new("projection_relations", relations.passed, serde_json::to_value(&relations).expect("serializable")),
    ];
    Ok(Report::new("actions", &l.text, checks))
}

pub fn transition(arg: &str, seed: u64) -> Result<Report, InputError> {
    let l = load(arg)?;
    let tub = l.file.tubular_data()?.ok_or_else(|| InputError("spec has no `tubular` section".into()))?;
    let id = TubularData::identity(tub.dim(), tub.v(), tub.h())?;
    let eight = Rational::from_integer(8.into());
    let probes: Vec<Probe> = random_points(tub.dim(), 8, seed)
        .into_iter()
        .map(|p| {
            let p: Vec<Rational> = p.iter().map(|c| c / eight.clone()).collect();
            Probe::new(p[..tub.v()].to_vec(), p[tub.v()..].to_vec())
        })
        .collect();
    let ts = dyadic_rationals(3, 10);
    let limit_check = |name: &str, r: carnot_core::Result<carnot_core::dnc::LimitReport>, exact: bool| match r {
        Ok(r) => {
            let ok = if exact { r.max_err == 0.0 } else { r.passed };
            Check::new(name, ok, json!({ "exact": r.exact, "min_slope": r.min_slope })).residual(r.max_err).order(r.min_slope)
        }
        Err(e) => Check::new(name, false, json!({ "error": e.to_string() })),
    };
    let mut checks = vec![
        limit_check("identity_self_transition", chart_transition_test(&id, &id, &probes, &ts, Exec::Parallel), true),
        limit_check("spec_self_transition", chart_transition_test(&tub, &tub, &probes, &ts, Exec::Parallel), false),
        limit_check("identity_to_spec", chart_transition_test(&id, &tub, &probes, &ts, Exec::Parallel), false),
    ];
    let coords = TubularData::coordinates(tub.dim(), tub.v());
    let f = coords.parse("y1")?;
    let dnc_check = dnc_smooth_fn(&tub, &f).and_then(|g| g.limit_test(&probes, &ts, Exec::Parallel));
    checks.push(limit_check("dnc_limit_y1", dnc_check, false));

    let nd = tub.fiber_dim() - tub.h();
    let mut misclassified = 0;
    let samples = random_points(tub.v() + tub.fiber_dim(), 50, seed.wrapping_add(1));
    for p in &samples {
        let (x, rest) = p.split_at(tub.v());
        let (h, n) = rest.split_at(tub.h());
        let class = chart_curve(&tub, x, h, n).and_then(|c| curve_class(&c, &tub));
        if class.ok() != Some(CurveClass { x: x.to_vec(), h: h.to_vec(), n: n[..nd].to_vec() }) {
            misclassified += 1;
        }
    }
    checks.push(Check::new("curve_classes", misclassified == 0, json!({ "curves": samples.len(), "misclassified": misclassified })));
    Ok(Report::new("transition", &l.text, checks))
}
