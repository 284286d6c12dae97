use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::mat2::{inner, Mat2};

/// Traceless 2×2 matrix `[[a, b], [c, -a]]`, an element of sl(2,ℝ).
///
/// Built from three free entries, so the trace is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Sl2Elem {
    a: f64,
    b: f64,
    c: f64,
}

/// Split quaternion `i = [[0,1],[-1,0]]`, timelike.
pub const I: Sl2Elem = Sl2Elem::from_entries(0.0, 1.0, -1.0);
/// Split quaternion `j = [[0,1],[1,0]]`.
pub const J: Sl2Elem = Sl2Elem::from_entries(0.0, 1.0, 1.0);
/// Split quaternion `k = [[1,0],[0,-1]]`.
pub const K: Sl2Elem = Sl2Elem::from_entries(1.0, 0.0, 0.0);
/// The 2×2 identity.
pub const ID2: Mat2 = Mat2::IDENTITY;

impl Sl2Elem {
    pub const ZERO: Sl2Elem = Sl2Elem::from_entries(0.0, 0.0, 0.0);

    /// The matrix `[[a, b], [c, -a]]`.
    pub const fn from_entries(a: f64, b: f64, c: f64) -> Self {
        Sl2Elem { a, b, c }
    }

    /// `x·i + y·j + z·k`.
    pub fn from_coords(x: f64, y: f64, z: f64) -> Self {
        Sl2Elem::from_entries(z, x + y, y - x)
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Sl2Elem::from_coords(v[0], v[1], v[2])
    }

    /// Coordinates in the basis `{i, j, k}`.
    pub fn coords(self) -> [f64; 3] {
        [0.5 * (self.b - self.c), 0.5 * (self.b + self.c), self.a]
    }

    /// Traceless part of an arbitrary matrix.
    pub fn project(m: &Mat2) -> Self {
        let h = 0.5 * (m.e00 - m.e11);
        Sl2Elem::from_entries(h, m.e01, m.e10)
    }

    pub fn mat(self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, -self.a)
    }

    pub fn det(self) -> f64 {
        -self.a * self.a - self.b * self.c
    }

    pub fn scale(self, s: f64) -> Self {
        Sl2Elem::from_entries(s * self.a, s * self.b, s * self.c)
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

/// α×β = ½(αβ − βα).
pub fn cross(alpha: &Sl2Elem, beta: &Sl2Elem) -> Sl2Elem {
    let ab = alpha.mat() * beta.mat();
    let ba = beta.mat() * alpha.mat();
    Sl2Elem::project(&(ab - ba).scale(0.5))
}

/// The restriction of `inner` to sl(2,ℝ).
pub fn inner_sl2(alpha: &Sl2Elem, beta: &Sl2Elem) -> f64 {
    inner(&alpha.mat(), &beta.mat())
}

impl Add for Sl2Elem {
    type Output = Sl2Elem;
    fn add(self, o: Sl2Elem) -> Sl2Elem {
        Sl2Elem::from_entries(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Sub for Sl2Elem {
    type Output = Sl2Elem;
    fn sub(self, o: Sl2Elem) -> Sl2Elem {
        Sl2Elem::from_entries(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Neg for Sl2Elem {
    type Output = Sl2Elem;
    fn neg(self) -> Sl2Elem {
        self.scale(-1.0)
    }
}

impl Mul<Sl2Elem> for f64 {
    type Output = Sl2Elem;
    fn mul(self, e: Sl2Elem) -> Sl2Elem {
        e.scale(self)
    }
}

impl fmt::Display for Sl2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords();
        write!(f, "{x}i + {y}j + {z}k")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Sl2Elem, b: Sl2Elem) -> bool {
        (a - b).max_abs() < 1e-15
    }

    #[test]
    fn basis_matrices() {
        assert_eq!(I.mat(), Mat2::new(0.0, 1.0, -1.0, 0.0));
        assert_eq!(J.mat(), Mat2::new(0.0, 1.0, 1.0, 0.0));
        assert_eq!(K.mat(), Mat2::new(1.0, 0.0, 0.0, -1.0));
    }

    #[test]
    fn basis_norms() {
        assert_eq!(inner_sl2(&I, &I), -1.0);
        assert_eq!(inner_sl2(&J, &J), 1.0);
        assert_eq!(inner_sl2(&K, &K), 1.0);
        assert_eq!(inner_sl2(&I, &J), 0.0);
        assert_eq!(inner_sl2(&I, &K), 0.0);
        assert_eq!(inner_sl2(&J, &K), 0.0);
    }

    #[test]
    fn cross_table() {
        // oracle: plain matrix commutators
        let half_comm = |x: Sl2Elem, y: Sl2Elem| (x.mat() * y.mat() - y.mat() * x.mat()).scale(0.5);
        assert_eq!(half_comm(I, J), K.mat());
        assert_eq!(half_comm(J, K), (-I).mat());
        assert!(close(cross(&I, &J), K));
        assert!(close(cross(&J, &K), -I));
        assert!(close(cross(&I, &K), -J));
        assert!(close(cross(&J, &J), Sl2Elem::ZERO));
    }

    #[test]
    fn coords_round_trip() {
        let e = Sl2Elem::from_coords(0.3, -1.7, 2.2);
        let [x, y, z] = e.coords();
        assert!((x - 0.3).abs() < 1e-15 && (y + 1.7).abs() < 1e-15 && (z - 2.2).abs() < 1e-15);
        assert_eq!(e.mat().trace(), 0.0);
    }

    #[test]
    fn square_is_minus_det() {
        let e = Sl2Elem::from_entries(0.4, -1.3, 0.8);
        let sq = e.mat() * e.mat();
        assert!((sq - Mat2::IDENTITY.scale(-e.det())).max_abs() < 1e-15);
    }
}
