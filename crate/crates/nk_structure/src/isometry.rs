use sl2_core::{exp_sl2, Mat2, Sl2Point};

use crate::pair::{ProductPoint, TangentPair};
use crate::NkError;

/// Central-difference step for pushforwards.
pub const PUSH_STEP: f64 = 1e-5;

/// The ambient isometries `φ₁(p,q) = (q,p)`, `φ₂(p,q) = (p⁻¹, qp⁻¹)` and
/// `φ_abc(p,q) = (apc, bqc)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Isometry {
    Phi1,
    Phi2,
    PhiAbc { a: Sl2Point, b: Sl2Point, c: Sl2Point },
}

impl Isometry {
    /// Validates the three matrices as elements of SL(2,ℝ).
    pub fn phi_abc(a: Mat2, b: Mat2, c: Mat2) -> Result<Self, NkError> {
        Ok(Isometry::PhiAbc {
            a: Sl2Point::new(a)?,
            b: Sl2Point::new(b)?,
            c: Sl2Point::new(c)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Isometry::Phi1 => "phi1",
            Isometry::Phi2 => "phi2",
            Isometry::PhiAbc { .. } => "phi_abc",
        }
    }

    pub fn apply(&self, x: &ProductPoint) -> ProductPoint {
        let (p, q) = (x.a, x.b);
        match *self {
            Isometry::Phi1 => ProductPoint::new(q, p),
            Isometry::Phi2 => {
                let pi = p.inverse();
                ProductPoint::new(pi, q * pi)
            }
            Isometry::PhiAbc { a, b, c } => ProductPoint::new(a * p * c, b * q * c),
        }
    }

    /// dφ(X) by differentiating `t ↦ φ(p·exp(tα), q·exp(tβ))` with central differences.
    pub fn pushforward(&self, x: &TangentPair) -> TangentPair {
        let h = PUSH_STEP;
        let along = |t: f64| {
            let c = ProductPoint::new(
                x.base.a * exp_sl2(&x.v.alpha.scale(t)),
                x.base.b * exp_sl2(&x.v.beta.scale(t)),
            );
            self.apply(&c)
        };
        let (fwd, bwd) = (along(h), along(-h));
        let base = self.apply(&x.base);
        let dx = (fwd.a.mat() - bwd.a.mat()).scale(0.5 / h);
        let dy = (fwd.b.mat() - bwd.b.mat()).scale(0.5 / h);
        TangentPair::from_parts(base, base.a.pull_back(&dx), base.b.pull_back(&dy))
    }
}

pub fn isometry_phi1(p: &ProductPoint) -> ProductPoint {
    Isometry::Phi1.apply(p)
}

pub fn isometry_phi2(p: &ProductPoint) -> ProductPoint {
    Isometry::Phi2.apply(p)
}

pub fn isometry_phi_abc(p: &ProductPoint, a: Mat2, b: Mat2, c: Mat2) -> Result<ProductPoint, NkError> {
    Ok(Isometry::phi_abc(a, b, c)?.apply(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sl2_core::sample_point;

    #[test]
    fn phi1_swaps() {
        let u = sample_point(11);
        let out = isometry_phi1(&ProductPoint::new(Sl2Point::IDENTITY, u));
        assert_eq!(out, ProductPoint::new(u, Sl2Point::IDENTITY));
    }

    #[test]
    fn phi2_formula() {
        let (p, q) = (sample_point(1), sample_point(2));
        let out = isometry_phi2(&ProductPoint::new(p, q));
        let pinv = p.mat().inverse().unwrap();
        assert!((out.a.mat() - pinv).max_abs() < 1e-13);
        assert!((out.b.mat() - q.mat() * pinv).max_abs() < 1e-13);
    }

    #[test]
    fn phi_abc_rejects_non_unimodular() {
        let bad = Mat2::IDENTITY.scale(3.0);
        assert!(Isometry::phi_abc(bad, Mat2::IDENTITY, Mat2::IDENTITY).is_err());
    }
}
