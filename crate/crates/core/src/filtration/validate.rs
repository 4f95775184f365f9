use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{format_point, FiltrationSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg;
use crate::scalar::{rat, Rational};
use crate::symexpr::{lie_bracket, VectorField};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankCheck {
    pub point: usize,
    pub weight: usize,
    pub rank: usize,
    pub expected: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketCheck {
    pub point: usize,
    /// Positions of the two fields in layer order.
    pub pair: (usize, usize),
    pub weights: (usize, usize),
    pub target_weight: usize,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub points: Vec<String>,
    pub ranks: Vec<RankCheck>,
    pub brackets: Vec<BracketCheck>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &BracketCheck> {
        self.brackets.iter().filter(|b| !b.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.brackets.iter().map(|b| b.residual).fold(0.0, f64::max)
    }
}

/// Rank and bracket checks at the spec's own sample points.
pub fn check_filtration(spec: &FiltrationSpec, tol: f64) -> Result<ValidationReport> {
    check_filtration_at(spec, spec.samples(), tol, Exec::default())
}

/// Rank and bracket checks at arbitrary rational points.
///
/// Cumulative ranks must agree across all points and reach `d` at the top
/// weight; otherwise a [`Error::RankDeficiency`] is returned. Bracket
/// violations are recorded in the report.
pub fn check_filtration_at(spec: &FiltrationSpec, points: &[Vec<Rational>], tol: f64, exec: Exec) -> Result<ValidationReport> {
    let d = spec.dim();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    let fields = spec.fields();
    let mut pairs = Vec::new();
    for i in 0..fields.len() {
        for j in (i + 1)..fields.len() {
            let target = spec.target_weight(fields[i].0, fields[j].0);
            pairs.push((i, j, target, lie_bracket(fields[i].1, fields[j].1)?));
        }
    }
    let weights = spec.weights();
    let rank_tol = spec.tolerances().rank;

    let per_point = exec.map_range(points.len(), |k| -> Result<(Vec<usize>, Vec<BracketCheck>)> {
        let p = &points[k];
        let values: Vec<Vec<Rational>> = fields.iter().map(|(_, f)| f.eval(p)).collect::<Result<_>>()?;
        let upto = |w: usize| -> Vec<Vec<Rational>> {
            fields.iter().zip(&values).filter(|((fw, _), _)| *fw <= w).map(|(_, v)| v.clone()).collect()
        };
        let ranks = weights.iter().map(|&w| linalg::rank(&upto(w), d, rank_tol)).collect();
        let mut checks = Vec::with_capacity(pairs.len());
        for (i, j, target, bracket) in &pairs {
            let b = VectorField::eval(bracket, p)?;
            let (_, residual) = linalg::project(&upto(*target), &b, rank_tol);
            checks.push(BracketCheck {
                point: k,
                pair: (*i, *j),
                weights: (fields[*i].0, fields[*j].0),
                target_weight: *target,
                residual,
                passed: residual <= tol,
            });
        }
        Ok((ranks, checks))
    });

    let mut ranks = Vec::new();
    let mut brackets = Vec::new();
    let mut expected: Option<Vec<usize>> = None;
    for (k, res) in per_point.into_iter().enumerate() {
        let (r, checks) = res?;
        let exp = expected.get_or_insert_with(|| r.clone()).clone();
        for (idx, &w) in weights.iter().enumerate() {
            let want = if idx + 1 == weights.len() { d } else { exp[idx] };
            ranks.push(RankCheck { point: k, weight: w, rank: r[idx], expected: want, passed: r[idx] == want });
        }
        brackets.extend(checks);
    }
    if let Some(bad) = ranks.iter().find(|r| !r.passed) {
        return Err(Error::RankDeficiency(format!(
            "cumulative frame of weight {} has rank {} at {}, expected {}",
            bad.weight,
            bad.rank,
            format_point(&points[bad.point]),
            bad.expected
        )));
    }
    let passed = brackets.iter().all(|b| b.passed);
    Ok(ValidationReport { points: points.iter().map(|p| format_point(p)).collect(), ranks, brackets, passed })
}

/// Seeded rational points with coordinates `p/q`, `|p| ≤ 8`, `1 ≤ q ≤ 4`.
pub fn random_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::fixtures::*;
    use crate::scalar::int;

    #[test]
    fn bundled_shapes_pass() {
        for spec in [heisenberg(), engel(), involutive(), perturbed_heisenberg()] {
            let report = check_filtration(&spec, 1e-8).unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn involutive_residuals_exactly_zero() {
        let report = check_filtration(&involutive(), 1e-8).unwrap();
        assert!(report.brackets.iter().all(|b| b.residual == 0.0));
    }

    #[test]
    fn random_points_are_reproducible_and_checked() {
        let a = random_points(3, 10, 7);
        assert_eq!(a, random_points(3, 10, 7));
        let report = check_filtration_at(&heisenberg(), &a, 1e-8, Exec::Sequential).unwrap();
        assert!(report.passed);
        assert_eq!(report.points.len(), 10);
    }

    #[test]
    fn rank_two_frame_claiming_full_tangent_is_fatal() {
        let s = spec(&["x", "y", "z"], &[(1, &[&["1", "0", "0"], &["0", "1", "x"]])], vec![vec![int(0); 3]]);
        assert!(matches!(check_filtration(&s, 1e-8), Err(Error::RankDeficiency(_))));
    }

    #[test]
    fn nonconstant_rank_is_fatal() {
        // x∂y degenerates at x = 0
        let s = spec(
            &["x", "y"],
            &[(1, &[&["0", "x"]]), (2, &[&["1", "0"], &["0", "1"]])],
            vec![vec![int(1), int(0)], vec![int(0), int(0)]],
        );
        assert!(matches!(check_filtration(&s, 1e-8), Err(Error::RankDeficiency(_))));
    }

    #[test]
    fn bracket_outside_next_layer_is_reported() {
        // [∂x, ∂y + x∂z] = ∂z is only admitted at weight 3
        let s = spec(
            &["x", "y", "z"],
            &[(1, &[&["1", "0", "0"], &["0", "1", "x"]]), (3, &[&["0", "0", "1"]])],
            vec![vec![int(1), int(0), int(0)]],
        );
        let report = check_filtration(&s, 1e-8).unwrap();
        assert!(!report.passed);
        let v: Vec<_> = report.violations().collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].target_weight, 2);
    }
}
