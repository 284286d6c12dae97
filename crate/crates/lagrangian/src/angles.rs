use std::sync::Arc;

use nk_structure::Isometry;
use normal_forms::{angle_dist, isometry_angle_map, AngleMap, AngleTriple};
use sl2_core::Sl2Point;

use crate::frame::angles_at;
use crate::immersion::{Composed, Immersion};
use crate::LagError;

/// Predicted against computed angle functions of `φ ∘ f` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryAngleCheck {
    pub map: AngleMap,
    pub original: AngleTriple,
    pub predicted: AngleTriple,
    pub computed: AngleTriple,
    pub residual: f64,
}

/// Distance that keeps the timelike angle in place and compares the two
/// spacelike angles as an unordered pair.
pub fn angle_set_distance(a: &AngleTriple, b: &AngleTriple) -> f64 {
    let d = |i: usize, j: usize| angle_dist(a.angles[i], b.angles[j]);
    let straight = d(1, 1).max(d(2, 2));
    let crossed = d(1, 2).max(d(2, 1));
    d(0, 0).max(straight.min(crossed))
}

pub fn isometry_angle_check(inner: Arc<dyn Immersion>, map: AngleMap, u: &Sl2Point) -> Result<IsometryAngleCheck, LagError> {
    let original = angles_at(inner.as_ref(), u)?;
    let iso = match map {
        AngleMap::Phi1 => Isometry::Phi1,
        AngleMap::Phi2 => Isometry::Phi2,
    };
    let composed = Composed::new(iso, inner);
    let computed = angles_at(&composed, u)?;
    let predicted = isometry_angle_map(&original, map);
    let residual = angle_set_distance(&predicted, &computed);
    Ok(IsometryAngleCheck { map, original, predicted, computed, residual })
}
