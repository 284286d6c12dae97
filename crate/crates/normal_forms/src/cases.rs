use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::pair::Delta;
use crate::NfError;

/// Tolerance for the parameter constraints of a displayed form.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_2pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI - 1e-15 {
        0.0
    } else {
        r
    }
}

/// Distance on the circle ℝ/2πℤ.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(a - b);
    d.min(2.0 * PI - d)
}

/// Distance from `x` to the lattice `period·ℤ`.
pub fn lattice_dist(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

/// The normal forms. All angles are doubled angles `2θ` in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalFormCase {
    Case1 { angles: [f64; 3] },
    Case2 { angle1: f64, angle2: f64, c: f64 },
    Case3 { t: f64 },
    Case4 { angle: f64 },
    Case5 { angle1: f64, angle2: f64, x: f64, y: f64 },
    Refined1 { angles: [f64; 3] },
    Refined2 { angle1: f64, angle2: f64 },
    Refined3 { sign: f64 },
    Refined4 { angle1: f64, angle2: f64, lambda: f64 },
}

fn constraint(ok: bool, what: &str) -> Result<(), NfError> {
    if ok {
        Ok(())
    } else {
        Err(NfError::Constraint(what.to_string()))
    }
}

impl NormalFormCase {
    /// Case 5 with `y` solved from `y·sin 2θ₁ = −x·cos 2θ₁`.
    pub fn case5_from_x(angle1: f64, angle2: f64, x: f64) -> Result<Self, NfError> {
        constraint(angle1.sin().abs() > CONSTRAINT_TOL, "sin 2θ₁ ≠ 0 is needed to solve for y")?;
        Ok(NormalFormCase::Case5 { angle1, angle2, x, y: -x * angle1.cos() / angle1.sin() })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            NormalFormCase::Case1 { .. } => "case1",
            NormalFormCase::Case2 { .. } => "case2",
            NormalFormCase::Case3 { .. } => "case3",
            NormalFormCase::Case4 { .. } => "case4",
            NormalFormCase::Case5 { .. } => "case5",
            NormalFormCase::Refined1 { .. } => "refined1",
            NormalFormCase::Refined2 { .. } => "refined2",
            NormalFormCase::Refined3 { .. } => "refined3",
            NormalFormCase::Refined4 { .. } => "refined4",
        }
    }

    pub fn is_refined(&self) -> bool {
        self.tag().starts_with("refined")
    }

    pub fn delta(&self) -> Delta {
        match self {
            NormalFormCase::Case1 { .. } | NormalFormCase::Refined1 { .. } => Delta::D1,
            NormalFormCase::Case5 { .. } | NormalFormCase::Refined4 { .. } => Delta::D3,
            _ => Delta::D2,
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            NormalFormCase::Case1 { angles } | NormalFormCase::Refined1 { angles } => {
                vec![("two_theta1", angles[0]), ("two_theta2", angles[1]), ("two_theta3", angles[2])]
            }
            NormalFormCase::Case2 { angle1, angle2, c } => {
                vec![("two_theta1", angle1), ("two_theta2", angle2), ("c", c)]
            }
            NormalFormCase::Case3 { t } => vec![("t", t)],
            NormalFormCase::Case4 { angle } => vec![("two_theta", angle)],
            NormalFormCase::Case5 { angle1, angle2, x, y } => {
                vec![("two_theta1", angle1), ("two_theta2", angle2), ("x", x), ("y", y)]
            }
            NormalFormCase::Refined2 { angle1, angle2 } => vec![("two_theta1", angle1), ("two_theta2", angle2)],
            NormalFormCase::Refined3 { sign } => vec![("sign", sign)],
            NormalFormCase::Refined4 { angle1, angle2, lambda } => {
                vec![("two_theta1", angle1), ("two_theta2", angle2), ("lambda", lambda)]
            }
        }
    }

    /// Checks the printed parameter restrictions.
    pub fn check_constraints(&self) -> Result<(), NfError> {
        let tol = CONSTRAINT_TOL;
        match *self {
            NormalFormCase::Case1 { angles } => constraint(angles.iter().all(|a| a.is_finite()), "finite angles"),
            NormalFormCase::Case2 { angle1, angle2, c } => {
                constraint(angle1.sin().abs() > tol, "θ₁ ≠ 0, π/2")?;
                if c.abs() > tol {
                    constraint(
                        (angle1.cos() - angle2.cos()).abs() <= tol && (angle1.sin() + angle2.sin()).abs() <= tol,
                        "c ≠ 0 requires cos 2θ₁ = cos 2θ₂ and sin 2θ₁ = −sin 2θ₂",
                    )?;
                }
                Ok(())
            }
            NormalFormCase::Case3 { t } => constraint(t.is_finite(), "finite t"),
            NormalFormCase::Case4 { angle } => constraint(angle.sin().abs() > tol, "θ ≠ 0, π/2"),
            NormalFormCase::Case5 { angle1, x, y, .. } => {
                constraint(x.abs() > tol, "x ≠ 0")?;
                constraint((y * angle1.sin() + x * angle1.cos()).abs() <= tol, "y sin 2θ₁ = −x cos 2θ₁")
            }
            NormalFormCase::Refined1 { angles } => {
                constraint(lattice_dist(angles.iter().sum(), 2.0 * PI) <= tol, "θ₁+θ₂+θ₃ = 0 mod π")
            }
            NormalFormCase::Refined2 { angle1, angle2 } => {
                constraint(angle1.sin().abs() > tol, "θ₁ ≠ 0, π/2")?;
                constraint(lattice_dist(2.0 * angle1 + angle2, 2.0 * PI) <= tol, "2θ₁+θ₂ = 0 mod π")
            }
            NormalFormCase::Refined3 { sign } => constraint(sign == 1.0 || sign == -1.0, "sign is ±1"),
            NormalFormCase::Refined4 { angle1, angle2, lambda } => {
                constraint(lattice_dist(2.0 * angle1 + angle2, 2.0 * PI) <= tol, "2θ₁+θ₂ = 0 mod π")?;
                constraint((angle2 / 2.0).sin().abs() > tol, "θ₂ ≠ 0, π")?;
                constraint(lambda.abs() > tol, "λ ≠ 0")
            }
        }
    }

    /// The displayed matrices `(A, B)`.
    pub fn matrices(&self) -> Result<(Matrix3<f64>, Matrix3<f64>), NfError> {
        self.check_constraints()?;
        Ok(match *self {
            NormalFormCase::Case1 { angles } | NormalFormCase::Refined1 { angles } => (
                Matrix3::from_diagonal(&angles.map(f64::cos).into()),
                Matrix3::from_diagonal(&angles.map(f64::sin).into()),
            ),
            NormalFormCase::Case2 { angle1, angle2, c } => type2(angle1, angle2, c),
            NormalFormCase::Refined2 { angle1, angle2 } => type2(angle1, angle2, 0.0),
            NormalFormCase::Case3 { t } => {
                let r2 = 2f64.sqrt();
                (
                    Matrix3::new(-1.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0),
                    Matrix3::new(0.0, t, r2, 0.0, 0.0, 0.0, 0.0, r2, 0.0),
                )
            }
            NormalFormCase::Case4 { angle } => type3(angle),
            NormalFormCase::Refined3 { sign } => {
                let (a, b) = type3(if sign > 0.0 { 2.0 * PI / 3.0 } else { 4.0 * PI / 3.0 });
                (a, b)
            }
            NormalFormCase::Case5 { angle1, angle2, x, y } => type4(angle1, angle2, x, y),
            NormalFormCase::Refined4 { angle1, angle2, lambda } => {
                let h = angle2 / 2.0;
                type4(angle1, angle2, lambda.sinh() * h.sin(), lambda.sinh() * h.cos())
            }
        })
    }

    /// Representative after removing gauge freedom: `c → 0` (case 2),
    /// `t → 0` (case 3), `x > 0` (case 5), spacelike angles sorted (case 1).
    pub fn canonical(&self) -> Self {
        let w = wrap_2pi;
        match *self {
            NormalFormCase::Case1 { angles } => NormalFormCase::Case1 { angles: sort_spacelike(angles) },
            NormalFormCase::Refined1 { angles } => NormalFormCase::Refined1 { angles: sort_spacelike(angles) },
            NormalFormCase::Case2 { angle1, angle2, .. } => NormalFormCase::Case2 { angle1: w(angle1), angle2: w(angle2), c: 0.0 },
            NormalFormCase::Case3 { .. } => NormalFormCase::Case3 { t: 0.0 },
            NormalFormCase::Case4 { angle } => NormalFormCase::Case4 { angle: w(angle) },
            NormalFormCase::Case5 { angle1, angle2, x, y } => {
                let s = if x < 0.0 { -1.0 } else { 1.0 };
                NormalFormCase::Case5 { angle1: w(angle1), angle2: w(angle2), x: s * x, y: s * y }
            }
            NormalFormCase::Refined2 { angle1, angle2 } => NormalFormCase::Refined2 { angle1: w(angle1), angle2: w(angle2) },
            NormalFormCase::Refined3 { sign } => NormalFormCase::Refined3 { sign },
            NormalFormCase::Refined4 { angle1, angle2, lambda } => {
                NormalFormCase::Refined4 { angle1: w(angle1), angle2: w(angle2), lambda: lambda.abs() }
            }
        }
    }

    /// Largest parameter difference after canonicalization (angles on the
    /// circle); `None` when the tags differ.
    pub fn param_distance(&self, other: &NormalFormCase) -> Option<f64> {
        let (a, b) = (self.canonical(), other.canonical());
        if a.tag() != b.tag() {
            return None;
        }
        let pa = a.params();
        let pb = b.params();
        Some(
            pa.iter()
                .zip(pb.iter())
                .map(|((name, x), (_, y))| if name.starts_with("two_theta") { angle_dist(*x, *y) } else { (x - y).abs() })
                .fold(0.0, f64::max),
        )
    }
}

fn sort_spacelike(angles: [f64; 3]) -> [f64; 3] {
    let mut out = angles.map(wrap_2pi);
    if out[2] < out[1] {
        out.swap(1, 2);
    }
    out
}

fn type2(angle1: f64, angle2: f64, c: f64) -> (Matrix3<f64>, Matrix3<f64>) {
    let (c1, s1, c2, s2) = (angle1.cos(), angle1.sin(), angle2.cos(), angle2.sin());
    let b = -(c * c + 2.0 * c1) / (2.0 * s1);
    (
        Matrix3::new(c1, 1.0, 0.0, 0.0, c1, 0.0, 0.0, 0.0, c2),
        Matrix3::new(s1, b, c, 0.0, s1, 0.0, 0.0, c, s2),
    )
}

fn type3(angle: f64) -> (Matrix3<f64>, Matrix3<f64>) {
    let (l, m) = (angle.cos(), angle.sin());
    let c = -l / m;
    // b = −csc³(2θ)/2
    let b = -0.5 / (m * m * m);
    (
        Matrix3::new(l, 0.0, 1.0, 0.0, l, 0.0, 0.0, 1.0, l),
        Matrix3::new(m, b, c, 0.0, m, 0.0, 0.0, c, m),
    )
}

fn type4(angle1: f64, angle2: f64, x: f64, y: f64) -> (Matrix3<f64>, Matrix3<f64>) {
    let s = (1.0 + x * x + y * y).sqrt();
    let (c1, s1) = (s * angle1.cos(), s * angle1.sin());
    (
        Matrix3::new(c1, x, 0.0, -x, c1, 0.0, 0.0, 0.0, angle2.cos()),
        Matrix3::new(s1, y, 0.0, -y, s1, 0.0, 0.0, 0.0, angle2.sin()),
    )
}
