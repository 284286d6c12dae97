use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::NfError;

pub const SYMMETRY_TOL: f64 = 1e-8;
pub const COMMUTATOR_TOL: f64 = 1e-8;
pub const UNIT_TOL: f64 = 1e-7;

/// Gram matrices of the three admissible frame types on Lorentzian ℝ³.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Delta {
    D1,
    D2,
    D3,
}

impl Delta {
    pub fn matrix(self) -> Matrix3<f64> {
        match self {
            Delta::D1 => Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            Delta::D2 => Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0),
            Delta::D3 => Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Delta::D1 => 1,
            Delta::D2 => 2,
            Delta::D3 => 3,
        }
    }

    pub fn from_index(i: u8) -> Result<Self, NfError> {
        match i {
            1 => Ok(Delta::D1),
            2 => Ok(Delta::D2),
            3 => Ok(Delta::D3),
            _ => Err(NfError::Parse(format!("delta must be 1, 2 or 3, got {i}"))),
        }
    }
}

/// Operators `A`, `B` written in a basis whose Gram matrix is `delta`.
///
/// Column `j` holds the image of the `j`-th basis vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorPair {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub delta: Delta,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairResiduals {
    pub symmetry: f64,
    pub commutator: f64,
    pub unit: f64,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    delta: u8,
    #[serde(rename = "A")]
    a: [[f64; 3]; 3],
    #[serde(rename = "B")]
    b: [[f64; 3]; 3],
}

pub fn rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
}

pub fn from_rows(r: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| r[i][j])
}

impl OperatorPair {
    pub fn new(a: Matrix3<f64>, b: Matrix3<f64>, delta: Delta) -> Self {
        OperatorPair { a, b, delta }
    }

    pub fn gram(&self) -> Matrix3<f64> {
        self.delta.matrix()
    }

    pub fn residuals(&self) -> PairResiduals {
        let g = self.gram();
        let skew = |m: &Matrix3<f64>| {
            let s = g * m;
            (s - s.transpose()).amax()
        };
        PairResiduals {
            symmetry: skew(&self.a).max(skew(&self.b)),
            commutator: (self.a * self.b - self.b * self.a).amax(),
            unit: (self.a * self.a + self.b * self.b - Matrix3::identity()).amax(),
        }
    }

    pub fn validate(&self) -> Result<PairResiduals, NfError> {
        if self.a.iter().chain(self.b.iter()).any(|x| !x.is_finite()) {
            return Err(NfError::InvalidPair { what: "non-finite entry", residual: f64::NAN });
        }
        let r = self.residuals();
        let scale = self.a.amax().max(self.b.amax()).max(1.0);
        if r.symmetry > SYMMETRY_TOL * scale {
            return Err(NfError::InvalidPair { what: "operators are not Δ-symmetric", residual: r.symmetry });
        }
        if r.commutator > COMMUTATOR_TOL * scale * scale {
            return Err(NfError::InvalidPair { what: "operators do not commute", residual: r.commutator });
        }
        if r.unit > UNIT_TOL * scale * scale {
            return Err(NfError::InvalidPair { what: "A² + B² differs from Id", residual: r.unit });
        }
        Ok(r)
    }

    pub fn from_json_str(s: &str) -> Result<Self, NfError> {
        let raw: PairJson = serde_json::from_str(s).map_err(|e| NfError::Parse(e.to_string()))?;
        Ok(OperatorPair::new(from_rows(&raw.a), from_rows(&raw.b), Delta::from_index(raw.delta)?))
    }

    pub fn to_json_string(&self) -> String {
        let raw = PairJson { delta: self.delta.index(), a: rows(&self.a), b: rows(&self.b) };
        serde_json::to_string(&raw).expect("plain arrays serialize")
    }
}
