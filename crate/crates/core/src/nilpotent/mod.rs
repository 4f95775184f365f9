//! Graded nilpotent Lie algebra arithmetic: BCH products, group operations in
//! exponential coordinates, dilations and per-degree deformation scalings.

mod actions;
mod algebra;
mod bch;
pub mod examples;
mod group;
mod laws;

pub use actions::{apply_action, is_multiplicative, k1_product, ActionForm, K1Point};
pub use algebra::{ConstantEntry, GradedLieAlgebra};
pub use bch::{bch, dynkin_word_count, MAX_STEP};
pub use group::{dilate, dilation_automorphism, group_inv, group_mul, identity, GroupElement};
pub use laws::{law_k1, law_k2, scaled_algebra, DegreeScaling, Graded3, LeviForm};
