//! Filtrations `H¹ ⊆ … ⊆ H^{k+1} = TM` given by frames of polynomial vector
//! fields, their validation at sample points, the osculating graded algebra at
//! a point and adapted exponential charts.
//!
//! All pointwise algebra is done over the rationals: sample points are
//! rational and the fields have rational coefficients, so ranks, bracket
//! residuals and structure constants are exact.

mod chart;
mod validate;

pub use chart::{dilation, exp_chart, exp_chart_at, exp_chart_displacement, exp_chart_inverse, exp_chart_inverse_at};
pub use validate::{
    check_filtration, check_filtration_at, random_points, BracketCheck, RankCheck, ValidationReport,
};

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis};
use crate::nilpotent::GradedLieAlgebra;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::symexpr::{lie_bracket, CompiledField, Coordinates, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub rank: f64,
    pub bracket: f64,
    pub newton: f64,
    pub newton_max_iter: usize,
    pub flow_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank: 1e-9, bracket: 1e-8, newton: 1e-12, newton_max_iter: 50, flow_steps: 512 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weight: usize,
    pub fields: Vec<VectorField>,
}

#[derive(Debug, Clone)]
pub struct FiltrationSpec {
    coords: Coordinates,
    layers: Vec<Layer>,
    samples: Vec<Vec<Rational>>,
    tolerances: Tolerances,
}

impl FiltrationSpec {
    /// Checks structure only: dimensions, increasing weights, at least one sample.
    pub fn new(coords: Coordinates, layers: Vec<Layer>, samples: Vec<Vec<Rational>>, tolerances: Tolerances) -> Result<Self> {
        let d = coords.dim();
        if d == 0 {
            return Err(Error::InvalidFiltration("dimension must be positive".into()));
        }
        if layers.is_empty() {
            return Err(Error::InvalidFiltration("at least one layer is required".into()));
        }
        let mut prev = 0;
        for layer in &layers {
            if layer.weight <= prev {
                return Err(Error::InvalidFiltration(format!(
                    "weights must be positive and strictly increasing (got {} after {prev})",
                    layer.weight
                )));
            }
            prev = layer.weight;
            if let Some(f) = layer.fields.iter().find(|f| f.dim() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
            }
        }
        if samples.is_empty() {
            return Err(Error::InvalidFiltration("at least one sample point is required".into()));
        }
        if let Some(s) = samples.iter().find(|s| s.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: s.len() });
        }
        Ok(FiltrationSpec { coords, layers, samples, tolerances })
    }

    pub fn dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn coords(&self) -> &Coordinates {
        &self.coords
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn samples(&self) -> &[Vec<Rational>] {
        &self.samples
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// `k + 1`: the weight of the last layer, from which `H^w = TM`.
    pub fn depth(&self) -> usize {
        self.layers.last().map_or(0, |l| l.weight)
    }

    pub fn weights(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.weight).collect()
    }

    /// Every field with its weight, in layer order.
    pub fn fields(&self) -> Vec<(usize, &VectorField)> {
        self.layers
            .iter()
            .flat_map(|l| l.fields.iter().map(move |f| (l.weight, f)))
            .collect()
    }

    pub fn sample(&self, index: usize) -> Result<&[Rational]> {
        self.samples
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange { index, dim: self.samples.len() })
    }

    /// Weight index that brackets of weights `a` and `b` must land in.
    pub fn target_weight(&self, a: usize, b: usize) -> usize {
        (a + b).min(self.depth())
    }
}

/// Ordered frame `(Y₁,…,Y_d)` at a base point, drawn greedily from the layers.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    base: Vec<Rational>,
    fields: Vec<VectorField>,
    weights: Vec<usize>,
    /// Position of each member in [`FiltrationSpec::fields`].
    source: Vec<usize>,
    compiled: Vec<CompiledField>,
}

impl AdaptedFrame {
    /// Greedy selection in layer order, keeping fields that extend the span at `a`.
    pub fn new(spec: &FiltrationSpec, a: &[Rational]) -> Result<Self> {
        let d = spec.dim();
        if a.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.len() });
        }
        let mut basis = EchelonBasis::new(d, spec.tolerances.rank);
        let mut fields = Vec::new();
        let mut weights = Vec::new();
        let mut source = Vec::new();
        for (k, (w, f)) in spec.fields().into_iter().enumerate() {
            if basis.try_insert(&f.eval(a)?) {
                fields.push(f.clone());
                weights.push(w);
                source.push(k);
            }
        }
        if fields.len() < d {
            return Err(Error::RankDeficiency(format!(
                "frame spans only {} of {d} dimensions at {}",
                fields.len(),
                format_point(a)
            )));
        }
        let compiled = fields.iter().map(CompiledField::new).collect();
        Ok(AdaptedFrame { base: a.to_vec(), fields, weights, source, compiled })
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn base_f64(&self) -> Vec<f64> {
        self.base.iter().map(Scalar::to_f64).collect()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source
    }

    pub fn compiled(&self) -> &[CompiledField] {
        &self.compiled
    }

    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    /// Frame vectors evaluated at `p`, as matrix rows (columns are the fields).
    pub fn matrix_at<S: Scalar>(&self, p: &[S]) -> Result<Vec<Vec<S>>> {
        let cols = self.fields.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>>>()?;
        Ok(linalg::columns_to_rows(&cols, self.dim()))
    }

    /// Coordinates of `v` in the frame evaluated at the base point.
    pub fn coordinates_at_base(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        let m = self.matrix_at(&self.base)?;
        linalg::solve(&m, v, 0.0).ok_or_else(|| Error::RankDeficiency("adapted frame is singular".into()))
    }
}

/// Osculating graded algebra at a point together with the frame it is expressed in.
#[derive(Debug, Clone)]
pub struct Osculating {
    pub frame: AdaptedFrame,
    pub algebra: GradedLieAlgebra<Rational>,
}

/// Levi structure constants at `a`: each bracket `[Y_i, Y_j](a)` expanded in the
/// adapted frame, keeping the coefficients on members of weight `w_i + w_j`.
pub fn levi_constants(spec: &FiltrationSpec, a: &[Rational]) -> Result<Osculating> {
    let frame = AdaptedFrame::new(spec, a)?;
    let d = frame.dim();
    let tol = spec.tolerances.bracket;
    let mut entries = Vec::new();
    let mut bracket_cache: BTreeMap<(usize, usize), VectorField> = BTreeMap::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let target = frame.weights[i] + frame.weights[j];
            if target > spec.depth() && frame.weights.iter().all(|&w| w < target) {
                continue;
            }
            let b = bracket_cache
                .entry((frame.source[i], frame.source[j]))
                .or_insert(lie_bracket(&frame.fields[i], &frame.fields[j])?);
            let coeffs = frame.coordinates_at_base(&b.eval(a)?)?;
            for (m, c) in coeffs.into_iter().enumerate() {
                let wm = frame.weights[m];
                if wm == target {
                    entries.push((i, j, m, c));
                } else if wm > target && c.abs().to_f64() > tol {
                    return Err(Error::BracketViolation(format!(
                        "[Y{}, Y{}] has weight-{wm} component {} at {}",
                        i + 1,
                        j + 1,
                        format_rational(&c),
                        format_point(a)
                    )));
                }
            }
        }
    }
    let algebra = GradedLieAlgebra::from_constants(frame.weights.clone(), entries)?;
    Ok(Osculating { frame, algebra })
}

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::scalar::int;

    pub fn spec(names: &[&str], layers: &[(usize, &[&[&str]])], samples: Vec<Vec<Rational>>) -> FiltrationSpec {
        let coords = Coordinates::new(names.iter().map(|s| s.to_string()).collect()).unwrap();
        let layers = layers
            .iter()
            .map(|(w, fs)| Layer {
                weight: *w,
                fields: fs.iter().map(|f| VectorField::parse(&coords, f).unwrap()).collect(),
            })
            .collect();
        FiltrationSpec::new(coords, layers, samples, Tolerances::default()).unwrap()
    }

    pub fn heisenberg() -> FiltrationSpec {
        spec(
            &["x", "y", "z"],
            &[(1, &[&["1", "0", "-y/2"], &["0", "1", "x/2"]]), (2, &[&["0", "0", "1"]])],
            vec![vec![int(0); 3], vec![int(1), int(2), int(-1)]],
        )
    }

    pub fn engel() -> FiltrationSpec {
        spec(
            &["x", "y", "z", "w"],
            &[
                (1, &[&["1", "0", "0", "0"], &["0", "1", "x", "x^2/2"]]),
                (2, &[&["0", "0", "1", "x"]]),
                (3, &[&["0", "0", "0", "1"]]),
            ],
            vec![vec![int(0); 4], vec![int(1), int(-1), int(2), int(3)]],
        )
    }

    pub fn involutive() -> FiltrationSpec {
        spec(
            &["x", "y", "z"],
            &[(1, &[&["1", "0", "0"], &["0", "1", "0"]]), (2, &[&["0", "0", "1"]])],
            vec![vec![int(0); 3], vec![int(2), int(-3), int(1)]],
        )
    }

    pub fn perturbed_heisenberg() -> FiltrationSpec {
        spec(
            &["x", "y", "z"],
            &[(1, &[&["1", "0", "-y*(1 + x^2)/2"], &["0", "1", "x/2"]]), (2, &[&["0", "0", "1"]])],
            vec![vec![int(0); 3], vec![int(1), int(0), int(0)]],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn heisenberg_constants() {
        for a in heisenberg().samples() {
            let osc = levi_constants(&heisenberg(), a).unwrap();
            assert_eq!(osc.algebra.dims(), vec![2, 1]);
            assert_eq!(osc.algebra.nonzero_constants(), vec![(0, 1, 2, int(1))]);
        }
    }

    #[test]
    fn engel_constants_at_origin() {
        let spec = engel();
        let osc = levi_constants(&spec, spec.sample(0).unwrap()).unwrap();
        assert_eq!(
            osc.algebra.nonzero_constants(),
            vec![(0, 1, 2, int(1)), (0, 2, 3, int(1))]
        );
        assert_eq!(osc.algebra.dims(), vec![2, 1, 1]);
    }

    #[test]
    fn involutive_is_abelian() {
        let spec = involutive();
        let osc = levi_constants(&spec, spec.sample(1).unwrap()).unwrap();
        assert!(osc.algebra.is_abelian());
    }

    #[test]
    fn perturbed_constant_varies_with_point() {
        let spec = perturbed_heisenberg();
        let at0 = levi_constants(&spec, spec.sample(0).unwrap()).unwrap();
        let at1 = levi_constants(&spec, spec.sample(1).unwrap()).unwrap();
        assert_eq!(at0.algebra.constant(0, 1, 2), &int(1));
        assert_eq!(at1.algebra.constant(0, 1, 2), &rat(3, 2));
    }

    #[test]
    fn greedy_frame_skips_dependent_fields() {
        let s = spec(
            &["x", "y"],
            &[(1, &[&["1", "0"], &["2", "0"]]), (2, &[&["1", "1"], &["0", "1"]])],
            vec![vec![int(0), int(0)]],
        );
        let f = AdaptedFrame::new(&s, s.sample(0).unwrap()).unwrap();
        assert_eq!(f.source_indices(), &[0, 2]);
        assert_eq!(f.weights(), &[1, 2]);
    }

    #[test]
    fn bracket_of_too_high_weight_is_an_error() {
        // [∂x, ∂y + x∂w] = ∂w has weight 3, but weight-1 brackets must stay in H²
        let s = spec(
            &["x", "y", "z", "w"],
            &[
                (1, &[&["1", "0", "0", "0"], &["0", "1", "0", "x"]]),
                (2, &[&["0", "0", "1", "0"]]),
                (3, &[&["0", "0", "0", "1"]]),
            ],
            vec![vec![int(0); 4]],
        );
        assert!(matches!(levi_constants(&s, s.sample(0).unwrap()), Err(Error::BracketViolation(_))));
    }

    #[test]
    fn structural_validation() {
        let coords = Coordinates::new(vec!["x".into()]).unwrap();
        let layer = |w| Layer { weight: w, fields: vec![VectorField::coordinate(1, 0)] };
        let t = Tolerances::default();
        assert!(FiltrationSpec::new(coords.clone(), vec![layer(2), layer(1)], vec![vec![int(0)]], t).is_err());
        assert!(FiltrationSpec::new(coords.clone(), vec![layer(1)], vec![], t).is_err());
        assert!(FiltrationSpec::new(coords, vec![layer(1)], vec![vec![int(0), int(1)]], t).is_err());
    }
}
