use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Sl2Elem;
use crate::mat2::Mat2;
use crate::Sl2Error;

/// Accepted without change when |det − 1| is at most this.
pub const DET_EXACT_TOL: f64 = 1e-12;
/// Renormalized by √det up to this drift, rejected beyond.
pub const DET_RENORM_TOL: f64 = 1e-6;
/// Below this |det(α)| the exponential uses the nilpotent branch.
pub const NILPOTENT_EPS: f64 = 1e-14;

/// An element of SL(2,ℝ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2Point(Mat2);

impl Sl2Point {
    pub const IDENTITY: Sl2Point = Sl2Point(Mat2::IDENTITY);

    pub fn new(m: Mat2) -> Result<Self, Sl2Error> {
        let d = m.det();
        if !m.is_finite() || !d.is_finite() {
            return Err(Sl2Error::NonFinite);
        }
        let drift = (d - 1.0).abs();
        if drift <= DET_EXACT_TOL {
            Ok(Sl2Point(m))
        } else if drift <= DET_RENORM_TOL && d > 0.0 {
            Ok(Sl2Point(m.scale(1.0 / d.sqrt())))
        } else {
            Err(Sl2Error::NotUnimodular { det: d })
        }
    }

    /// Divide by √det; for matrices with positive determinant only.
    pub fn normalized(m: Mat2) -> Result<Self, Sl2Error> {
        let d = m.det();
        if !(d > 0.0) || !m.is_finite() {
            return Err(Sl2Error::NonPositiveDet { det: d });
        }
        Ok(Sl2Point(m.scale(1.0 / d.sqrt())))
    }

    pub fn mat(self) -> Mat2 {
        self.0
    }

    /// The inverse, which for det = 1 is the adjugate.
    pub fn inverse(self) -> Sl2Point {
        Sl2Point(self.0.adjugate())
    }

    /// Left translation of a Lie algebra element: the tangent vector `aα`.
    pub fn translate(self, alpha: &Sl2Elem) -> Mat2 {
        self.0 * alpha.mat()
    }

    /// Adjoint action `a α a⁻¹`.
    pub fn adjoint(self, alpha: &Sl2Elem) -> Sl2Elem {
        Sl2Elem::project(&(self.0 * alpha.mat() * self.0.adjugate()))
    }

    /// Pull an ambient tangent vector `v ∈ T_a` back to sl(2,ℝ): the traceless part of a⁻¹v.
    pub fn pull_back(self, v: &Mat2) -> Sl2Elem {
        Sl2Elem::project(&(self.0.adjugate() * *v))
    }

    pub fn distance(self, other: Sl2Point) -> f64 {
        (self.0 - other.0).max_abs()
    }
}

impl Mul for Sl2Point {
    type Output = Sl2Point;
    fn mul(self, o: Sl2Point) -> Sl2Point {
        // products of unimodular matrices drift by rounding only
        Sl2Point::normalized(self.0 * o.0).unwrap_or(Sl2Point(self.0 * o.0))
    }
}

/// Closed-form exponential of a traceless matrix, branching on the sign of det(α).
pub fn exp_sl2(alpha: &Sl2Elem) -> Sl2Point {
    let d = alpha.det();
    let m = alpha.mat();
    let out = if d.abs() < NILPOTENT_EPS {
        Mat2::IDENTITY + m
    } else if d > 0.0 {
        let r = d.sqrt();
        Mat2::IDENTITY.scale(r.cos()) + m.scale(r.sin() / r)
    } else {
        let r = (-d).sqrt();
        Mat2::IDENTITY.scale(r.cosh()) + m.scale(r.sinh() / r)
    };
    let det = out.det();
    Sl2Point(out.scale(1.0 / det.sqrt()))
}

/// Traceless matrix with the three free entries uniform in [−1, 1].
pub fn random_elem<R: Rng + ?Sized>(rng: &mut R) -> Sl2Elem {
    Sl2Elem::from_entries(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
    )
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Sl2Point {
    exp_sl2(&random_elem(rng))
}

/// Deterministic sample of SL(2,ℝ) for a seed.
pub fn sample_point(rng_seed: u64) -> Sl2Point {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    random_point(&mut rng)
}
