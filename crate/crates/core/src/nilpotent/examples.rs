//! Reference algebras used throughout the tests and benches.

use crate::nilpotent::GradedLieAlgebra;
use crate::scalar::Scalar;

/// `[e₁, e₂] = e₃`, degrees (1, 1, 2).
pub fn heisenberg<S: Scalar>() -> GradedLieAlgebra<S> {
    GradedLieAlgebra::from_constants(vec![1, 1, 2], [(0, 1, 2, S::one())]).expect("valid constants")
}

/// `[e₁, e₂] = e₃`, `[e₁, e₃] = e₄`, degrees (1, 1, 2, 3).
pub fn engel<S: Scalar>() -> GradedLieAlgebra<S> {
    GradedLieAlgebra::from_constants(vec![1, 1, 2, 3], [(0, 1, 2, S::one()), (0, 2, 3, S::one())])
        .expect("valid constants")
}

/// Free step-2 algebra on three generators: `[e_i, e_j] = e_{ij}`.
pub fn free_step2_rank3<S: Scalar>() -> GradedLieAlgebra<S> {
    GradedLieAlgebra::from_constants(
        vec![1, 1, 1, 2, 2, 2],
        [(0, 1, 3, S::one()), (0, 2, 4, S::one()), (1, 2, 5, S::one())],
    )
    .expect("valid constants")
}
