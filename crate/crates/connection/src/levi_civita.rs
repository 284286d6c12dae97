use nk_structure::chart::{curvature, j, p, tensor_g};
use nk_structure::{ps_q, AmbientVector, PairVec, ProductPoint, TangentPair};
use sl2_core::{cross, inner, Mat2};

use crate::field::{flat_derivative, lie_bracket, LeftInvariantField};

/// Componentwise tangential projection `v − ⟨v,a⟩/⟨a,a⟩·a`, returned in chart form.
pub fn project_tangent(base: ProductPoint, w: &AmbientVector) -> TangentPair {
    let proj = |v: &Mat2, a: &Mat2| *v - a.scale(inner(v, a) / inner(a, a));
    let (a, b) = (base.a.mat(), base.b.mat());
    let t = AmbientVector::new(proj(&w.x, &a), proj(&w.y, &b));
    TangentPair::from_ambient(base, &t)
}

/// ∇ᴱ_X Y = D_X Y − ½⟨X,Y⟩(a,b) − ½⟨Y,QX⟩(−a,b), evaluated in M(2,ℝ)².
pub fn product_connection(x: &TangentPair, y: &LeftInvariantField) -> TangentPair {
    let base = x.base;
    let (a, b) = (base.a.mat(), base.b.mat());
    let pair_inner = |u: &AmbientVector, w: &AmbientVector| inner(&u.x, &w.x) + inner(&u.y, &w.y);
    let (xa, ya, qx) = (x.ambient(), y.at(base).ambient(), ps_q(x).ambient());
    let w = flat_derivative(x, y)
        - AmbientVector::new(a, b).scale(0.5 * pair_inner(&xa, &ya))
        - AmbientVector::new(-a, b).scale(0.5 * pair_inner(&ya, &qx));
    project_tangent(base, &w)
}

/// Chart form of ∇ᴱ: `(α×γ, β×δ)`.
pub fn product_connection_chart(x: &PairVec, y: &PairVec) -> PairVec {
    PairVec::new(cross(&x.alpha, &y.alpha), cross(&x.beta, &y.beta))
}

fn nk_correction(x: &PairVec, y: &PairVec) -> PairVec {
    (j(&tensor_g(x, &p(y))) + j(&tensor_g(y, &p(x)))).scale(-0.5)
}

/// ∇̃_X Y = ∇ᴱ_X Y − ½(JG(X,PY) + JG(Y,PX)).
pub fn nk_connection(x: &TangentPair, y: &LeftInvariantField) -> TangentPair {
    let e = product_connection(x, y);
    e.with(e.v + nk_correction(&x.v, &y.pair()))
}

pub fn nk_connection_chart(x: &PairVec, y: &PairVec) -> PairVec {
    product_connection_chart(x, y) + nk_correction(x, y)
}

/// `∇̃_X(JY) − J∇̃_X Y − G(X,Y)`.
pub fn nabla_j_residual(x: &TangentPair, y: &LeftInvariantField) -> PairVec {
    let jy = LeftInvariantField::from_pair(j(&y.pair()));
    nk_connection(x, &jy).v - j(&nk_connection(x, y).v) - tensor_g(&x.v, &y.pair())
}

/// Largest coordinate of [`nabla_j_residual`].
pub fn nabla_j_check(x: &TangentPair, y: &LeftInvariantField) -> f64 {
    nabla_j_residual(x, y).max_abs()
}

/// `((∇̃_X P)Y, ½(JG(X,PY) + JPG(X,Y)))`.
pub fn nabla_p_sides(x: &TangentPair, y: &LeftInvariantField) -> (PairVec, PairVec) {
    let py = LeftInvariantField::from_pair(p(&y.pair()));
    let lhs = nk_connection(x, &py).v - p(&nk_connection(x, y).v);
    let rhs = (j(&tensor_g(&x.v, &py.pair())) + j(&p(&tensor_g(&x.v, &y.pair())))).scale(0.5);
    (lhs, rhs)
}

pub fn nabla_p_check(x: &TangentPair, y: &LeftInvariantField) -> f64 {
    let (l, r) = nabla_p_sides(x, y);
    (l - r).max_abs()
}

/// `∇̃_X∇̃_Y Z − ∇̃_Y∇̃_X Z − ∇̃_{[X,Y]}Z` for left-invariant fields.
pub fn curvature_chart(x: &PairVec, y: &PairVec, z: &PairVec) -> PairVec {
    let br = lie_bracket(&LeftInvariantField::from_pair(*x), &LeftInvariantField::from_pair(*y)).pair();
    nk_connection_chart(x, &nk_connection_chart(y, z)) - nk_connection_chart(y, &nk_connection_chart(x, z))
        - nk_connection_chart(&br, z)
}

pub fn connection_curvature(
    x: &LeftInvariantField,
    y: &LeftInvariantField,
    z: &LeftInvariantField,
    base: ProductPoint,
) -> TangentPair {
    TangentPair::new(base, curvature_chart(&x.pair(), &y.pair(), &z.pair()))
}

/// Worst disagreement between the closed-form curvature and the
/// connection-derived one under each sign convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConventionCheck {
    /// `R = ∇∇ − ∇∇ − ∇_[,]`.
    pub standard: f64,
    /// The negated convention.
    pub opposite: f64,
    pub triples: usize,
}

impl ConventionCheck {
    pub fn convention(&self) -> &'static str {
        if self.standard <= self.opposite {
            "R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y]Z"
        } else {
            "R(X,Y)Z = ∇_Y∇_X Z − ∇_X∇_Y Z + ∇_[X,Y]Z"
        }
    }
}

/// Runs over all ordered triples of `fields`.
pub fn curvature_convention_check(fields: &[PairVec]) -> ConventionCheck {
    let mut out = ConventionCheck { standard: 0.0, opposite: 0.0, triples: 0 };
    for x in fields {
        for y in fields {
            for z in fields {
                let closed = curvature(x, y, z);
                let conn = curvature_chart(x, y, z);
                out.standard = out.standard.max((closed - conn).max_abs());
                out.opposite = out.opposite.max((closed + conn).max_abs());
                out.triples += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nk_structure::basis6;
    use sl2_core::{sample_point, Sl2Elem, I, J, K};

    const Z: Sl2Elem = Sl2Elem::ZERO;

    fn base() -> ProductPoint {
        ProductPoint::new(sample_point(3), sample_point(4))
    }

    #[test]
    fn product_connection_splits() {
        let x = TangentPair::from_parts(base(), I, Z);
        let y = LeftInvariantField::new(Z, J);
        assert!(product_connection(&x, &y).v.max_abs() < 1e-12);
    }

    #[test]
    fn product_connection_of_i_along_j() {
        let x = TangentPair::from_parts(base(), I, Z);
        let y = LeftInvariantField::new(J, Z);
        let out = product_connection(&x, &y);
        assert!((out.v - PairVec::new(K, Z)).max_abs() < 1e-12);
    }

    #[test]
    fn projection_leaves_tangent_output() {
        let x = TangentPair::from_parts(base(), Sl2Elem::from_coords(0.4, 1.0, -0.2), J);
        let y = LeftInvariantField::new(K, Sl2Elem::from_coords(0.3, 0.1, 0.8));
        let out = product_connection(&x, &y).ambient();
        assert!(inner(&out.x, &x.base.a.mat()).abs() < 1e-9);
        assert!(inner(&out.y, &x.base.b.mat()).abs() < 1e-9);
    }

    #[test]
    fn zero_field_gives_zero_residuals() {
        let x = TangentPair::from_parts(base(), I, K);
        let y = LeftInvariantField::default();
        assert!(nabla_j_check(&x, &y) < 1e-15);
        assert!(nabla_p_check(&x, &y) < 1e-15);
    }

    #[test]
    fn convention_is_the_standard_one() {
        let c = curvature_convention_check(&basis6());
        assert_eq!(c.triples, 216);
        assert!(c.standard < 1e-12, "{c:?}");
        assert!(c.opposite > 0.1);
        assert!(c.convention().starts_with("R(X,Y)Z = ∇_X"));
    }
}
