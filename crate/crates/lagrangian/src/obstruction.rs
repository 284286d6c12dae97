use nalgebra::Vector3;
use normal_forms::{NfError, NormalFormCase, OperatorPair};

use crate::LagError;

/// Right-hand side of the Codazzi equation,
/// `−⅔(g(AY,Z)JBX − g(AX,Z)JBY − g(BY,Z)JAX + g(BX,Z)JAY)`, as `JEₖ` coordinates.
pub fn codazzi_rhs(pair: &OperatorPair, x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
    let d = pair.gram();
    let ip = |u: &Vector3<f64>, v: &Vector3<f64>| u.dot(&(d * v));
    let (a, b) = (&pair.a, &pair.b);
    let (ax, ay, bx, by) = (a * x, a * y, b * x, b * y);
    (bx * ip(&ay, z) - by * ip(&ax, z) - ax * ip(&by, z) + ay * ip(&bx, z)) * (-2.0 / 3.0)
}

/// The non-diagonalizable refined cases, with undoubled angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ObstructionCase {
    /// Requires `θ₁ ∉ {0, π/2} mod π`; `θ₂ = −2θ₁`.
    Case2 { theta1: f64 },
    Case3 { sign: f64 },
    /// Requires `λ ≠ 0`, `2θ₁ + θ₂ ≡ 0 mod π`, `θ₂ ∉ {0, π} mod 2π`.
    Case4 { lambda: f64, theta1: f64, theta2: f64 },
}

impl ObstructionCase {
    pub fn id(&self) -> u8 {
        match self {
            ObstructionCase::Case2 { .. } => 2,
            ObstructionCase::Case3 { .. } => 3,
            ObstructionCase::Case4 { .. } => 4,
        }
    }

    /// Index of the `JEₖ` component that carries the contradiction.
    pub fn component(&self) -> usize {
        match self {
            ObstructionCase::Case4 { .. } => 1,
            _ => 0,
        }
    }

    pub fn normal_form(&self) -> Result<NormalFormCase, LagError> {
        let inadmissible = |e: NfError| LagError::Inadmissible(e.to_string());
        let case = match *self {
            ObstructionCase::Case2 { theta1 } => {
                NormalFormCase::Refined2 { angle1: 2.0 * theta1, angle2: -4.0 * theta1 }
            }
            ObstructionCase::Case3 { sign } => NormalFormCase::Refined3 { sign },
            ObstructionCase::Case4 { lambda, theta1, theta2 } => {
                NormalFormCase::Refined4 { angle1: 2.0 * theta1, angle2: 2.0 * theta2, lambda }
            }
        };
        case.check_constraints().map_err(inadmissible)?;
        Ok(case)
    }
}

/// The Codazzi right-hand side at `X = E₁`, `Y = Z = E₂` in the case's normal form.
pub fn codazzi_obstruction(case: &ObstructionCase) -> Result<[f64; 3], LagError> {
    let nf = case.normal_form()?;
    let (a, b) = nf.matrices()?;
    let pair = OperatorPair::new(a, b, nf.delta());
    let (e1, e2) = (Vector3::x(), Vector3::y());
    let r = codazzi_rhs(&pair, &e1, &e2, &e2);
    Ok([r[0], r[1], r[2]])
}

/// `|component|` of [`codazzi_obstruction`].
pub fn obstruction_norm(case: &ObstructionCase) -> Result<f64, LagError> {
    Ok(codazzi_obstruction(case)?[case.component()].abs())
}
