use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases::NormalFormCase;
use crate::pair::{Delta, OperatorPair};
use crate::NfError;

/// Largest boost rapidity used when scrambling a displayed form.
pub const MAX_RAPIDITY: f64 = 0.5;

/// Columns: a Δ₁-orthonormal basis written in Δ-coordinates.
fn delta1_basis(delta: Delta) -> Matrix3<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match delta {
        Delta::D1 => Matrix3::identity(),
        Delta::D2 => Matrix3::new(h, h, 0.0, -h, h, 0.0, 0.0, 0.0, 1.0),
        Delta::D3 => Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0),
    }
}

fn rotation(phi: f64) -> Matrix3<f64> {
    let (s, c) = phi.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

fn boost(eta: f64) -> Matrix3<f64> {
    let (ch, sh) = (eta.cosh(), eta.sinh());
    Matrix3::new(ch, sh, 0.0, sh, ch, 0.0, 0.0, 0.0, 1.0)
}

/// A random `T` with `TᵀΔT = Δ` in the identity component.
pub fn random_isometry<R: Rng + ?Sized>(delta: Delta, rng: &mut R) -> Matrix3<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let lambda = rotation(rng.gen_range(0.0..two_pi)) * boost(rng.gen_range(0.0..=MAX_RAPIDITY)) * rotation(rng.gen_range(0.0..two_pi));
    let phi = delta1_basis(delta);
    phi * lambda * phi.try_inverse().expect("basis change is invertible")
}

/// The displayed matrices of `case`, conjugated by a seeded Δ-isometry.
pub fn generate(case: &NormalFormCase, seed: u64) -> Result<OperatorPair, NfError> {
    let (a, b) = case.matrices()?;
    let delta = case.delta();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_isometry(delta, &mut rng);
    let ti = t.try_inverse().expect("isometries are invertible");
    Ok(OperatorPair::new(t * a * ti, t * b * ti, delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometries_preserve_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [Delta::D1, Delta::D2, Delta::D3] {
            let t = random_isometry(d, &mut rng);
            assert!((t.transpose() * d.matrix() * t - d.matrix()).amax() < 1e-13);
        }
    }

    #[test]
    fn identity_case() {
        let p = generate(&NormalFormCase::Case1 { angles: [0.0; 3] }, 3).unwrap();
        assert!((p.a - Matrix3::identity()).amax() < 1e-13);
        assert!(p.b.amax() < 1e-13);
    }

    #[test]
    fn generated_pairs_are_valid() {
        let cases = [
            NormalFormCase::Case2 { angle1: 0.9, angle2: 4.0, c: 0.0 },
            NormalFormCase::Case3 { t: 1.0 },
            NormalFormCase::Case4 { angle: 2.0 },
            NormalFormCase::case5_from_x(std::f64::consts::FRAC_PI_3, 1.2, 0.7).unwrap(),
        ];
        for (i, c) in cases.iter().enumerate() {
            let r = generate(c, i as u64).unwrap().residuals();
            assert!(r.symmetry < 1e-10 && r.commutator < 1e-10 && r.unit < 1e-10, "{c:?} {r:?}");
        }
        assert!(generate(&NormalFormCase::Case2 { angle1: 0.0, angle2: 1.0, c: 0.0 }, 0).is_err());
    }
}
