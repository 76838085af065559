//! Explicit operators: dense images of disjoint-support groups, kernel
//! operators by duality and by quotient, and `ℓ_p`-sum decompositions.

mod dense_image;
mod injection;
mod kernel;
mod lp_sum;

pub use dense_image::{
    build_dense_image, dense_image_operator, group_weight, operator_norm_bound_check, DenseImage,
    DenseImageBuild, NormBoundReport, NormViolation, Placement, NORM_REL_TOL,
};
pub use injection::InjectionMap;
pub use kernel::{
    kernel_operator_via_duality, kernel_operator_via_quotient, DualityKernel, QuotientKernel,
};
pub use lp_sum::{lp_sum_decomposition, IsometryCheck, LpSumBlock, LpSumDecomposition};

use crate::operator::LinearOperator;
use crate::scalar::Scalar;

pub fn adjoint<S: Scalar>(t: &LinearOperator<S>) -> LinearOperator<S> {
    t.adjoint()
}
