//! Covariant derivatives on SL(2,ℝ)×SL(2,ℝ) computed through the flat
//! embedding into M(2,ℝ)², plus the brackets, curvature and frame tables
//! built on them.
//!
//! The second argument of every connection is a left-invariant field, so
//! results are again left-invariant and most computations reduce to algebra
//! on sl(2,ℝ)².

pub mod field;
pub mod levi_civita;
pub mod table;

pub use field::{flat_derivative, lie_bracket, LeftInvariantField};
pub use levi_civita::{
    connection_curvature, curvature_chart, curvature_convention_check, nabla_j_check, nabla_j_residual,
    nabla_p_check, nabla_p_sides, nk_connection, nk_connection_chart, product_connection,
    product_connection_chart, project_tangent, ConventionCheck,
};
pub use table::ConnectionTable;
