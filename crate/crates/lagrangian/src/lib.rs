//! Lagrangian immersions of SL(2,ℝ) into the nearly Kähler SL(2,ℝ)×SL(2,ℝ):
//! the three totally geodesic examples, JSON-described maps and their images
//! under the ambient isometries; frames, the operators `A`, `B`, angle
//! functions, the second fundamental form, the Gauss and Codazzi equations,
//! and the Codazzi obstructions of the non-diagonalizable cases.

pub mod angles;
pub mod equations;
pub mod frame;
pub mod immersion;
pub mod obstruction;
pub mod sff;

pub use angles::{isometry_angle_check, IsometryAngleCheck};
pub use equations::{
    anglederi_residual, codazzi_residual, codazzi_residual_with, compati_residual, derivatives, gauss_residual,
    gauss_residual_with, lagrprop_residual, sectional_curvature, sectional_curvature_intrinsic, sffc_residual,
    Derivatives,
};
pub use frame::{
    adapted_frame, angle_functions, angles_at, build_frame, extract_ab, frame_from_recipe, lagrangian_residual,
    FrameRecipe, LagrangianFrame,
};
pub use immersion::{Composed, Example, Immersion, ImmersionRegistry, ImmersionSpec, NumericImmersion};
pub use obstruction::{codazzi_obstruction, codazzi_rhs, obstruction_norm, ObstructionCase};
pub use sff::{
    change_frame, example2_f_transition, frame_data, minimality_residual, second_fundamental_form, FrameData,
    SecondFundamentalForm,
};

use normal_forms::NfError;
use sl2_core::Sl2Error;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LagError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("non-finite {0}")]
    NonFinite(String),
    #[error("degenerate {what} ({value:e})")]
    Degenerate { what: &'static str, value: f64 },
    #[error("map is not Lagrangian (residual {residual:e})")]
    NotLagrangian { residual: f64 },
    #[error("{what} does not split into TM ⊕ JTM (residual {residual:e})")]
    Projection { what: &'static str, residual: f64 },
    #[error("not of diagonalizable type: {0}")]
    NotDiagonalizable(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("immersion spec: {0}")]
    Spec(String),
    #[error("unknown immersion {0:?}")]
    Unknown(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Group(#[from] Sl2Error),
    #[error(transparent)]
    Classifier(#[from] NfError),
}
