//! Fixed-step classical Runge–Kutta flows of polynomial vector fields.

use crate::error::{Error, Result};
use crate::symexpr::VectorField;

/// Float-coefficient copy of a polynomial vector field for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompiledField {
    dim: usize,
    components: Vec<Vec<(f64, Vec<u32>)>>,
}

impl CompiledField {
    pub fn new(x: &VectorField) -> Self {
        let components = x
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, q)| (crate::scalar::Scalar::to_f64(q), m.exponents().to_vec()))
                    .collect()
            })
            .collect();
        CompiledField { dim: x.dim(), components }
    }

    /// `Σ_j coeffs[j] · fields[j]` as a single compiled field.
    pub fn combination(fields: &[CompiledField], coeffs: &[f64]) -> Self {
        assert_eq!(fields.len(), coeffs.len(), "one coefficient per field");
        let dim = fields.first().map_or(0, |f| f.dim);
        let mut components = vec![Vec::new(); dim];
        for (f, &k) in fields.iter().zip(coeffs) {
            if k == 0.0 {
                continue;
            }
            for (out, comp) in components.iter_mut().zip(&f.components) {
                out.extend(comp.iter().map(|(c, e)| (c * k, e.clone())));
            }
        }
        CompiledField { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_into(&self, p: &[f64], out: &mut [f64]) {
        for (o, comp) in out.iter_mut().zip(&self.components) {
            *o = comp
                .iter()
                .map(|(c, e)| {
                    e.iter()
                        .zip(p)
                        .fold(*c, |acc, (&k, &x)| if k == 0 { acc } else { acc * x.powi(k as i32) })
                })
                .sum();
        }
    }
}

/// Integrates `p' = rhs(p)` over `[0, time]` with `steps` classical RK4 substeps.
pub fn rk4<F>(rhs: F, p: &[f64], time: f64, steps: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(steps >= 1, "at least one substep");
    let d = p.len();
    let h = time / steps as f64;
    let mut state = p.to_vec();
    if time == 0.0 {
        return Ok(state);
    }
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut tmp = vec![0.0; d];
    for substep in 0..steps {
        rhs(&state, &mut k1);
        for i in 0..d {
            tmp[i] = state[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..d {
            tmp[i] = state[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..d {
            tmp[i] = state[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..d {
            state[i] += h * ((k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0);
        }
        if state.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { substep });
        }
    }
    Ok(state)
}

pub fn flow_compiled(x: &CompiledField, p: &[f64], time: f64, steps: usize) -> Result<Vec<f64>> {
    if p.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: p.len() });
    }
    rk4(|q, out| x.eval_into(q, out), p, time, steps)
}

/// Displacement `d` of the time-`time` flow of `x` from `base + offset`.
///
/// The state integrated is `d` itself, so round-off stays relative to the size
/// of the displacement rather than to the size of `base`.
pub fn flow_displacement(x: &CompiledField, base: &[f64], offset: &[f64], time: f64, steps: usize) -> Result<Vec<f64>> {
    if base.len() != x.dim() || offset.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: base.len().min(offset.len()) });
    }
    let rhs = |d: &[f64], out: &mut [f64]| {
        let p: Vec<f64> = base.iter().zip(offset).zip(d).map(|((b, o), d)| b + (o + d)).collect();
        x.eval_into(&p, out);
    };
    rk4(rhs, &vec![0.0; x.dim()], time, steps)
}

/// Time-`time` flow of `x` from `p`.
pub fn flow(x: &VectorField, p: &[f64], time: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::OutOfRange("flow needs at least one substep".into()));
    }
    flow_compiled(&CompiledField::new(x), p, time, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Coordinates;

    #[test]
    fn constant_field_is_integrated_exactly() {
        let dx = VectorField::coordinate(3, 0);
        for steps in [1, 4, 256] {
            assert_eq!(flow(&dx, &[0.0; 3], 1.0, steps).unwrap(), vec![1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn exponential_growth() {
        let c = Coordinates::new(vec!["x".into()]).unwrap();
        let x_dx = VectorField::parse(&c, &["x"]).unwrap();
        let end = flow(&x_dx, &[1.0], 1.0, 256).unwrap();
        assert!((end[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn zero_time_is_identity() {
        let c = Coordinates::new(vec!["x".into(), "y".into()]).unwrap();
        let f = VectorField::parse(&c, &["x*y", "1 - x^2"]).unwrap();
        assert_eq!(flow(&f, &[0.3, -0.7], 0.0, 8).unwrap(), vec![0.3, -0.7]);
    }

    #[test]
    fn blow_up_reports_substep() {
        let c = Coordinates::new(vec!["x".into()]).unwrap();
        let f = VectorField::parse(&c, &["x^2"]).unwrap();
        match flow(&f, &[1.0], 10.0, 4) {
            Err(Error::NonFinite { substep }) => assert!(substep < 4),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let c = Coordinates::new(vec!["x".into()]).unwrap();
        let f = VectorField::parse(&c, &["x"]).unwrap();
        let err = |n| (flow(&f, &[1.0], 1.0, n).unwrap()[0] - std::f64::consts::E).abs();
        for n in [4, 8, 16] {
            let ratio = err(n) / err(2 * n);
            assert!(ratio >= 12.0, "ratio {ratio} at {n} steps");
        }
    }
}
