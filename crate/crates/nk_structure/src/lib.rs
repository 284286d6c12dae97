//! The pseudo-nearly Kähler structure on SL(2,ℝ)×SL(2,ℝ): metric `g`, almost
//! complex structure `J`, almost product structures `P` and `Q`, the tensor
//! `G = ∇̃J`, the curvature tensor and the ambient isometries.
//!
//! Tangent vectors are stored as Lie-algebra pairs; [`chart`] holds the
//! base-free algebra and the functions here add base-point checking.

pub mod chart;
pub mod isometry;
pub mod pair;

pub use chart::SQRT3;
pub use isometry::{isometry_phi1, isometry_phi2, isometry_phi_abc, Isometry};
pub use pair::{
    basis6, random_pair, random_product_point, AmbientVector, PairVec, ProductPoint, TangentPair,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NkError {
    #[error("tangent vectors live at different base points (distance {0:e})")]
    BaseMismatch(f64),
    #[error(transparent)]
    Group(#[from] sl2_core::Sl2Error),
}

fn same_base(x: &TangentPair, y: &TangentPair) -> Result<(), NkError> {
    if x.base.same_as(&y.base) {
        Ok(())
    } else {
        Err(NkError::BaseMismatch(x.base.distance(&y.base)))
    }
}

pub fn metric_g(x: &TangentPair, y: &TangentPair) -> Result<f64, NkError> {
    same_base(x, y)?;
    Ok(chart::g(&x.v, &y.v))
}

pub fn cx_j(x: &TangentPair) -> TangentPair {
    x.with(chart::j(&x.v))
}

pub fn ps_p(x: &TangentPair) -> TangentPair {
    x.with(chart::p(&x.v))
}

pub fn ps_q(x: &TangentPair) -> TangentPair {
    x.with(chart::q(&x.v))
}

pub fn tensor_g(x: &TangentPair, y: &TangentPair) -> Result<TangentPair, NkError> {
    same_base(x, y)?;
    Ok(x.with(chart::tensor_g(&x.v, &y.v)))
}

pub fn curvature_r(x: &TangentPair, y: &TangentPair, z: &TangentPair) -> Result<TangentPair, NkError> {
    same_base(x, y)?;
    same_base(x, z)?;
    Ok(x.with(chart::curvature(&x.v, &y.v, &z.v)))
}

pub fn product_metric(x: &TangentPair, y: &TangentPair) -> Result<f64, NkError> {
    same_base(x, y)?;
    Ok(chart::product_metric(&x.v, &y.v))
}

pub fn constant_type_residual(x: &TangentPair, y: &TangentPair) -> Result<f64, NkError> {
    same_base(x, y)?;
    Ok(chart::constant_type_residual(&x.v, &y.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sl2_core::{sample_point, I, J};

    #[test]
    fn base_mismatch_is_reported() {
        let p = ProductPoint::IDENTITY;
        let q = ProductPoint::new(sample_point(5), sample_point(6));
        let x = TangentPair::from_parts(p, I, J);
        let y = TangentPair::from_parts(q, I, J);
        assert!(matches!(metric_g(&x, &y), Err(NkError::BaseMismatch(_))));
        assert!(metric_g(&x, &x).is_ok());
    }
}
