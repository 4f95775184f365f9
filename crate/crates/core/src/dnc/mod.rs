//! Deformation to the normal cone of `(ℝᵈ, V)` with `V = ℝᵛ × {0}`, its
//! weighted second deformation along a subbundle `H`, and the associated
//! chart-level tests.

mod chart;
mod curve;
mod dnc2;
mod quotient;
mod tubular;

pub use chart::{
    chart_transition_test, dnc_chart, dnc_chart_inverse, dnc_map, dnc_smooth_fn, dyadic_rationals, DncFunction, DncMap,
    DncPoint, LimitReport, Probe,
};
pub use curve::{chart_curve, curve_class, reparametrize, CurveClass};
pub use dnc2::{dnc2_chart, lambda0, lambda1, lambda_relation_test, projection01, Dnc2Point, RelationReport};
pub use quotient::{quotient_fiber_check, QuotientReport};
pub use tubular::{ProductLayout, TubularData};
