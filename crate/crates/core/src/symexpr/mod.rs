//! Exact polynomial expressions, vector fields, brackets and flows on a chart of ℝᵈ.

mod expr;
mod field;
mod flow;
mod parse;

pub use expr::{Expr, ExprDisplay, Monomial};
pub use field::{lie_bracket, vf_eval, VectorField};
pub use flow::{flow, flow_compiled, flow_displacement, rk4, CompiledField};
pub use parse::Coordinates;

use crate::error::Result;

/// Parses `text` over the given coordinates.
pub fn expr_parse(coords: &Coordinates, text: &str) -> Result<Expr> {
    coords.parse(text)
}

/// Partial derivative with respect to coordinate `i` (0-based).
pub fn expr_diff(e: &Expr, i: usize) -> Result<Expr> {
    e.diff(i)
}
