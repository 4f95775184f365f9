use serde::Serialize;

use super::CarnotContext;
use crate::convergence::{OrderStudy, MIN_ORDER};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filtration::{exp_chart_displacement, AdaptedFrame};
use crate::linalg;
use crate::newton::{self, NewtonOptions};
use crate::nilpotent::{bch, dilate};
use crate::scalar::{norm_f64, Rational};

/// Largest error accepted at the finest `u` of a convergence study.
pub const FINAL_ERR_TOL: f64 = 1e-2;

/// Residual floor for Newton iterates that stall on round-off; the dilation
/// `δ_{1/u}` amplifies the last bits of the flow by up to `u^{-depth}`.
pub const STALL_TOL: f64 = 1e-8;

/// How an arrow `(x, z, u)` is turned into a coordinate `ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `x = φ_z(δ_u ζ)`; products converge to `bch(η, ξ)`.
    SourceBased,
    /// `z = φ_x(δ_u ζ)` read backwards; products converge to `bch(ξ, η)`.
    TargetBased,
}

/// Pair product of the arrows with coordinates `ξ` (target `a`) and `η` (source
/// `a`) at scale `u`, read back in coordinates at the new source.
///
/// Target-based coordinates are the source-based construction with the two
/// factors exchanged.
pub fn rescaled_product(ctx: &CarnotContext, a: &[Rational], xi: &[f64], eta: &[f64], u: f64, orientation: Orientation) -> Result<Vec<f64>> {
    if !(u > 0.0 && u <= 0.5) {
        return Err(Error::OutOfRange(format!("u = {u} is outside (0, 1/2]")));
    }
    let osc = ctx.osculating(a)?;
    let frame = &osc.frame;
    let d = frame.dim();
    for v in [xi, eta] {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    let (first, second) = match orientation {
        Orientation::SourceBased => (xi, eta),
        Orientation::TargetBased => (eta, xi),
    };
    source_based(ctx, frame, first, second, u)
}

/// Every point is kept as an offset from `a`: `x = a + d_x`, `z = a + w`.
/// Residuals are then differences of small displacements, and the dilation
/// `δ_{1/u}` only amplifies round-off relative to the scale of the arrows.
fn source_based(ctx: &CarnotContext, frame: &AdaptedFrame, xi: &[f64], eta: &[f64], u: f64) -> Result<Vec<f64>> {
    let steps = ctx.flow_steps();
    let weights = frame.weights();
    let base = frame.base_f64();
    let m = frame.matrix_at(&base)?;
    let measure = |r: &[f64]| -> f64 {
        match linalg::solve(&m, r, 1e-14).and_then(|c| dilate(weights, &(1.0 / u), &c).ok()) {
            Some(c) => norm_f64(&c),
            None => f64::INFINITY,
        }
    };
    let opts = NewtonOptions { stall_tol: STALL_TOL, ..ctx.newton_options() };
    let origin = vec![0.0; frame.dim()];
    let disp = |offset: &[f64], v: &[f64]| exp_chart_displacement(frame, &base, offset, v, steps);

    let d_eta = dilate(weights, &u, eta)?;
    let dx = disp(&origin, &dilate(weights, &u, xi)?)?;

    let minus: Vec<f64> = d_eta.iter().map(|c| -c).collect();
    let w0 = disp(&origin, &minus)?;
    let f = |w: &[f64]| -> Result<Vec<f64>> { Ok(w.iter().zip(disp(w, &d_eta)?).map(|(a, b)| a + b).collect()) };
    let w = newton::solve_fd(f, &w0, opts, measure)?.x;

    let g = |zeta: &[f64]| -> Result<Vec<f64>> {
        let d = disp(&w, &dilate(weights, &u, zeta)?)?;
        Ok(w.iter().zip(d).zip(&dx).map(|((a, b), c)| (a + b) - c).collect())
    };
    let guess: Vec<f64> = xi.iter().zip(eta).map(|(p, q)| p + q).collect();
    Ok(newton::solve_fd(g, &guess, opts, measure)?.x)
}

/// The `u → 0` limit of [`rescaled_product`] in the osculating group at `a`.
pub fn osculating_limit(ctx: &CarnotContext, a: &[Rational], xi: &[f64], eta: &[f64], orientation: Orientation) -> Result<Vec<f64>> {
    let alg = ctx.osculating(a)?.algebra.to_scalar::<f64>();
    match orientation {
        Orientation::SourceBased => bch(&alg, eta, xi),
        Orientation::TargetBased => bch(&alg, xi, eta),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub orientation: Orientation,
    pub limit: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub study: OrderStudy,
    pub passed: bool,
}

impl ConvergenceReport {
    /// CSV with columns `u,err,est_order`.
    pub fn to_csv(&self) -> String {
        self.study.to_csv("u")
    }
}

/// `‖ζ_u − limit‖` over a grid of `u`, with the observed order of convergence.
pub fn convergence_study(
    ctx: &CarnotContext,
    a: &[Rational],
    xi: &[f64],
    eta: &[f64],
    us: &[f64],
    orientation: Orientation,
    exec: Exec,
) -> Result<ConvergenceReport> {
    let limit = osculating_limit(ctx, a, xi, eta, orientation)?;
    ctx.osculating(a)?;
    let values = exec.map(us, |&u| rescaled_product(ctx, a, xi, eta, u, orientation)).into_iter().collect::<Result<Vec<_>>>()?;
    let errs: Vec<f64> = values
        .iter()
        .map(|v| norm_f64(&v.iter().zip(&limit).map(|(p, q)| p - q).collect::<Vec<_>>()))
        .collect();
    let study = OrderStudy::new(us, &errs);
    let passed = study.passes(MIN_ORDER) && study.final_err() < FINAL_ERR_TOL;
    Ok(ConvergenceReport { orientation, limit, values, study, passed })
}
