//! 2×2 real matrices with the adjugate-trace inner product, the Lie algebra
//! sl(2,ℝ) with its cross product, and the group SL(2,ℝ).
//!
//! SL(2,ℝ) is the quadric ⟨a,a⟩ = −1 of signature-(2,2) space, i.e. anti-de Sitter 3-space.

pub mod algebra;
pub mod group;
pub mod mat2;

pub use algebra::{cross, inner_sl2, Sl2Elem, I, ID2, J, K};
pub use group::{exp_sl2, random_elem, random_point, sample_point, Sl2Point};
pub use mat2::{adjugate, inner, Mat2};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Sl2Error {
    #[error("determinant {det} is not within tolerance of 1")]
    NotUnimodular { det: f64 },
    #[error("determinant {det} is not positive")]
    NonPositiveDet { det: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}
