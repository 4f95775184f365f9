use super::AdaptedFrame;
use crate::error::{Error, Result};
use crate::linalg;
use crate::newton::{self, NewtonOptions, NewtonOutcome};
use crate::nilpotent;
use crate::scalar::Scalar;
use crate::symexpr::{flow_compiled, flow_displacement, CompiledField};

/// `φ_a(ξ)`: time-1 flow of `Σ ξ_j Y_j` from the frame's base point.
pub fn exp_chart(frame: &AdaptedFrame, xi: &[f64], steps: usize) -> Result<Vec<f64>> {
    exp_chart_at(frame, &frame.base_f64(), xi, steps)
}

/// Time-1 flow of `Σ ξ_j Y_j` from an arbitrary start point `z`.
pub fn exp_chart_at(frame: &AdaptedFrame, z: &[f64], xi: &[f64], steps: usize) -> Result<Vec<f64>> {
    let d = frame.dim();
    if xi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: xi.len() });
    }
    if z.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: z.len() });
    }
    if xi.iter().all(|&c| c == 0.0) {
        return Ok(z.to_vec());
    }
    flow_compiled(&CompiledField::combination(frame.compiled(), xi), z, 1.0, steps)
}

/// Displacement of `Σ ξ_j Y_j`'s time-1 flow started at `base + offset`.
pub fn exp_chart_displacement(frame: &AdaptedFrame, base: &[f64], offset: &[f64], xi: &[f64], steps: usize) -> Result<Vec<f64>> {
    let d = frame.dim();
    if xi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: xi.len() });
    }
    if xi.iter().all(|&c| c == 0.0) {
        return Ok(vec![0.0; d]);
    }
    flow_displacement(&CompiledField::combination(frame.compiled(), xi), base, offset, 1.0, steps)
}

/// `φ_a⁻¹(p)` by damped Newton, with residual measured in the Euclidean norm.
pub fn exp_chart_inverse(frame: &AdaptedFrame, p: &[f64], tol: f64, steps: usize) -> Result<Vec<f64>> {
    let opts = NewtonOptions { tol, ..NewtonOptions::default() };
    exp_chart_inverse_at(frame, &frame.base_f64(), p, None, opts, steps, newton::euclidean).map(|o| o.x)
}

/// Solves `φ_z(ξ) = p` for `ξ`.
///
/// Without a guess, Newton starts from the linearisation `F(z) ξ = p − z`.
pub fn exp_chart_inverse_at<M>(
    frame: &AdaptedFrame,
    z: &[f64],
    p: &[f64],
    guess: Option<Vec<f64>>,
    opts: NewtonOptions,
    steps: usize,
    measure: M,
) -> Result<NewtonOutcome>
where
    M: Fn(&[f64]) -> f64,
{
    let d = frame.dim();
    if p.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    let x0 = match guess {
        Some(g) => g,
        None => {
            let m = frame.matrix_at(z)?;
            let rhs: Vec<f64> = p.iter().zip(z).map(|(a, b)| a - b).collect();
            linalg::solve(&m, &rhs, 1e-14).ok_or_else(|| Error::RankDeficiency("frame singular at start point".into()))?
        }
    };
    let f = |xi: &[f64]| -> Result<Vec<f64>> {
        let q = exp_chart_at(frame, z, xi, steps)?;
        Ok(q.iter().zip(p).map(|(a, b)| a - b).collect())
    };
    newton::solve_fd(f, &x0, opts, measure)
}

/// Graded dilation `δ_u`: the weight-`w` coordinates are multiplied by `u^w`.
pub fn dilation<S: Scalar>(weights: &[usize], u: &S, xi: &[S]) -> Result<Vec<S>> {
    nilpotent::dilate(weights, u, xi)
}
