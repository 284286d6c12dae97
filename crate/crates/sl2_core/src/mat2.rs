use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A real 2×2 matrix `[[e00, e01], [e10, e11]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Mat2 {
    pub e00: f64,
    pub e01: f64,
    pub e10: f64,
    pub e11: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(e00: f64, e01: f64, e10: f64, e11: f64) -> Self {
        Mat2 { e00, e01, e10, e11 }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn to_rows(self) -> [[f64; 2]; 2] {
        [[self.e00, self.e01], [self.e10, self.e11]]
    }

    pub fn det(self) -> f64 {
        self.e00 * self.e11 - self.e01 * self.e10
    }

    pub fn trace(self) -> f64 {
        self.e00 + self.e11
    }

    /// Swap the diagonal, negate the off-diagonal.
    pub fn adjugate(self) -> Mat2 {
        Mat2::new(self.e11, -self.e01, -self.e10, self.e00)
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.e00, self.e10, self.e01, self.e11)
    }

    pub fn scale(self, s: f64) -> Mat2 {
        Mat2::new(s * self.e00, s * self.e01, s * self.e10, s * self.e11)
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            None
        } else {
            Some(self.adjugate().scale(1.0 / d))
        }
    }

    pub fn max_abs(self) -> f64 {
        self.e00
            .abs()
            .max(self.e01.abs())
            .max(self.e10.abs())
            .max(self.e11.abs())
    }

    pub fn frobenius(self) -> f64 {
        (self.e00 * self.e00 + self.e01 * self.e01 + self.e10 * self.e10 + self.e11 * self.e11)
            .sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.e00.is_finite() && self.e01.is_finite() && self.e10.is_finite() && self.e11.is_finite()
    }
}

/// ⟨a,b⟩ = −½·Tr(adj(a)·b), the signature-(2,2) form on M(2,ℝ).
pub fn inner(a: &Mat2, b: &Mat2) -> f64 {
    -0.5 * (a.adjugate() * *b).trace()
}

pub fn adjugate(m: &Mat2) -> Mat2 {
    m.adjugate()
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.e00 + o.e00, self.e01 + o.e01, self.e10 + o.e10, self.e11 + o.e11)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.e00 - o.e00, self.e01 - o.e01, self.e10 - o.e10, self.e11 - o.e11)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}

impl SubAssign for Mat2 {
    fn sub_assign(&mut self, o: Mat2) {
        *self = *self - o;
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e00 * o.e00 + self.e01 * o.e10,
            self.e00 * o.e01 + self.e01 * o.e11,
            self.e10 * o.e00 + self.e11 * o.e10,
            self.e10 * o.e01 + self.e11 * o.e11,
        )
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m.scale(self)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e00, self.e01, self.e10, self.e11)
    }
}
