//! Damped Newton iteration for square nonlinear systems.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::norm_f64;

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative step for central finite differences.
    pub fd_step: f64,
    /// A stalled iteration (no residual decrease under damping) still counts
    /// as converged when its residual is at most this round-off floor.
    pub stall_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 50, fd_step: 1e-7, stall_tol: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Central finite-difference Jacobian of `f` at `x`, returned by rows.
pub fn fd_jacobian<F>(f: &F, x: &[f64], rel_step: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut probe = x.to_vec();
    for j in 0..n {
        let h = rel_step * x[j].abs().max(1.0);
        probe[j] = x[j] + h;
        let plus = f(&probe)?;
        probe[j] = x[j] - h;
        let minus = f(&probe)?;
        probe[j] = x[j];
        cols.push(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<_>>());
    }
    let m = cols.first().map_or(0, Vec::len);
    Ok(linalg::columns_to_rows(&cols, m))
}

/// Solves `f(x) = 0` from `x0` with a finite-difference Jacobian.
///
/// `measure` maps a residual vector to the scalar compared against `tol`.
pub fn solve_fd<F, M>(f: F, x0: &[f64], opts: NewtonOptions, measure: M) -> Result<NewtonOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    M: Fn(&[f64]) -> f64,
{
    let step = opts.fd_step;
    solve_with(&f, |x: &[f64]| fd_jacobian(&f, x, step), x0, opts, measure)
}

/// Solves `f(x) = 0` with a caller-supplied Jacobian.
pub fn solve_with<F, J, M>(f: &F, jac: J, x0: &[f64], opts: NewtonOptions, measure: M) -> Result<NewtonOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    J: Fn(&[f64]) -> Result<Vec<Vec<f64>>>,
    M: Fn(&[f64]) -> f64,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    let mut res = measure(&fx);
    for iter in 0..opts.max_iter {
        if res <= opts.tol {
            return Ok(NewtonOutcome { x, residual: res, iterations: iter });
        }
        let j = jac(&x)?;
        let neg: Vec<f64> = fx.iter().map(|v| -v).collect();
        let Some(delta) = linalg::solve(&j, &neg, 1e-14) else {
            return Err(Error::NewtonFailure { iterations: iter, residual: res });
        };
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + damping * d).collect();
            if let Ok(ft) = f(&trial) {
                let rt = measure(&ft);
                if rt.is_finite() && rt < res {
                    x = trial;
                    fx = ft;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            return if res <= opts.tol.max(opts.stall_tol) {
                Ok(NewtonOutcome { x, residual: res, iterations: iter })
            } else {
                Err(Error::NewtonFailure { iterations: iter + 1, residual: res })
            };
        }
    }
    if res <= opts.tol {
        Ok(NewtonOutcome { x, residual: res, iterations: opts.max_iter })
    } else {
        Err(Error::NewtonFailure { iterations: opts.max_iter, residual: res })
    }
}

pub fn euclidean(r: &[f64]) -> f64 {
    norm_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_polynomial_system() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + x[1] - 3.0, x[0] - x[1] * x[1] + 3.0]);
        let out = solve_fd(f, &[1.5, 1.5], NewtonOptions::default(), euclidean).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-10 && (out.x[1] - 2.0).abs() < 1e-10, "{:?}", out.x);
    }

    #[test]
    fn reports_failure_with_residual() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + 1.0]);
        match solve_fd(f, &[0.5], NewtonOptions { max_iter: 5, ..Default::default() }, euclidean) {
            Err(Error::NewtonFailure { residual, .. }) => assert!(residual >= 1.0),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn already_converged_takes_no_steps() {
        let f = |x: &[f64]| Ok(vec![x[0] - 2.0]);
        let out = solve_fd(f, &[2.0], NewtonOptions::default(), euclidean).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.x, vec![2.0]);
    }
}
