//! Osculating graded nilpotent groups, deformation-to-the-normal-cone charts and
//! the Carnot deformation groupoid of a filtration of the tangent bundle of a
//! chart of ℝᵈ, together with the exact and numerical checks that tie them
//! together.
//!
//! Module map:
//!
//! * [`symexpr`]: exact rational polynomials, vector fields, Lie brackets, RK4 flows.
//! * [`filtration`]: filtration validation, Levi structure constants, adapted
//!   exponential charts and graded dilations.
//! * [`nilpotent`]: graded nilpotent Lie algebras, BCH products, deformation scalings
//!   and the closed-form step-2 / step-3 laws.
//! * [`dnc`]: deformation-to-the-normal-cone charts, transitions, functorial maps and
//!   the weighted curve model.
//! * [`carnot`]: the Carnot groupoid, its zoom action and the convergence of rescaled
//!   pair products to the osculating law.
//! * [`specfile`]: the JSON spec schema consumed by the `carnot-lab` CLI.

pub mod carnot;
pub mod convergence;
pub mod dnc;
pub mod error;
pub mod exec;
pub mod filtration;
pub mod linalg;
pub mod newton;
pub mod nilpotent;
pub mod scalar;
pub mod specfile;
pub mod symexpr;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
