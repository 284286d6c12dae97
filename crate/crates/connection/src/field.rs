use nk_structure::{AmbientVector, PairVec, ProductPoint, TangentPair};
use sl2_core::{Sl2Elem, I, J, K};

/// The field `(p,q) ↦ (pα, qβ)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct LeftInvariantField {
    pub alpha: Sl2Elem,
    pub beta: Sl2Elem,
}

impl LeftInvariantField {
    pub const fn new(alpha: Sl2Elem, beta: Sl2Elem) -> Self {
        LeftInvariantField { alpha, beta }
    }

    pub fn from_pair(v: PairVec) -> Self {
        LeftInvariantField::new(v.alpha, v.beta)
    }

    pub fn pair(&self) -> PairVec {
        PairVec::new(self.alpha, self.beta)
    }

    pub fn at(&self, base: ProductPoint) -> TangentPair {
        TangentPair::new(base, self.pair())
    }

    /// `X₁, X₂, X₃` on one factor: `a ↦ (ai, 0)` etc.
    pub fn first_factor_frame() -> [LeftInvariantField; 3] {
        [I, J, K].map(|e| LeftInvariantField::new(e, Sl2Elem::ZERO))
    }

    pub fn second_factor_frame() -> [LeftInvariantField; 3] {
        [I, J, K].map(|e| LeftInvariantField::new(Sl2Elem::ZERO, e))
    }
}

/// Euclidean derivative `D_X Y = (aαγ, bβδ)`.
pub fn flat_derivative(x: &TangentPair, y: &LeftInvariantField) -> AmbientVector {
    AmbientVector::new(
        x.base.a.mat() * x.v.alpha.mat() * y.alpha.mat(),
        x.base.b.mat() * x.v.beta.mat() * y.beta.mat(),
    )
}

/// `[X,Y] = (αγ − γα, βδ − δβ)` from matrix commutators.
pub fn lie_bracket(x: &LeftInvariantField, y: &LeftInvariantField) -> LeftInvariantField {
    let comm = |a: &Sl2Elem, b: &Sl2Elem| Sl2Elem::project(&(a.mat() * b.mat() - b.mat() * a.mat()));
    LeftInvariantField::new(comm(&x.alpha, &y.alpha), comm(&x.beta, &y.beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sl2_core::{exp_sl2, sample_point};

    #[test]
    fn flat_derivative_at_identity() {
        let x = TangentPair::from_parts(ProductPoint::IDENTITY, I, Sl2Elem::ZERO);
        let y = LeftInvariantField::new(J, Sl2Elem::ZERO);
        let d = flat_derivative(&x, &y);
        assert!((d.x - K.mat()).max_abs() < 1e-15);
        assert!(d.y.max_abs() < 1e-15);
        assert!(flat_derivative(&x, &LeftInvariantField::default()).max_abs() == 0.0);
    }

    #[test]
    fn flat_derivative_matches_difference_quotient() {
        let base = ProductPoint::new(sample_point(1), sample_point(2));
        let alpha = Sl2Elem::from_coords(0.3, -0.7, 0.2);
        let beta = Sl2Elem::from_coords(-0.1, 0.5, 0.9);
        let y = LeftInvariantField::new(Sl2Elem::from_coords(1.0, 0.2, -0.4), Sl2Elem::from_coords(0.0, 0.6, 0.3));
        let x = TangentPair::from_parts(base, alpha, beta);
        let h = 1e-5;
        let along = |t: f64| {
            let p = ProductPoint::new(base.a * exp_sl2(&alpha.scale(t)), base.b * exp_sl2(&beta.scale(t)));
            y.at(p).ambient()
        };
        let fd = (along(h) - along(-h)).scale(0.5 / h);
        assert!((fd - flat_derivative(&x, &y)).max_abs() < 1e-9);
    }

    #[test]
    fn bracket_of_frame() {
        let [x1, x2, x3] = LeftInvariantField::first_factor_frame();
        assert!((lie_bracket(&x1, &x2).alpha - K.scale(2.0)).max_abs() < 1e-15);
        assert!((lie_bracket(&x2, &x3).alpha + I.scale(2.0)).max_abs() < 1e-15);
        assert!((lie_bracket(&x1, &x3).alpha + J.scale(2.0)).max_abs() < 1e-15);
        assert!(lie_bracket(&x1, &x1).pair().max_abs() == 0.0);
    }
}
