use nk_structure::chart::g;
use nk_structure::PairVec;

/// Coefficients `ω_ij^k` with `∇_{E_i}E_j = Σ_k ω_ij^k E_k`, indices from 0.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConnectionTable {
    pub coeffs: [[[f64; 3]; 3]; 3],
    pub labels: [String; 3],
}

impl ConnectionTable {
    pub fn new(coeffs: [[[f64; 3]; 3]; 3], labels: [&str; 3]) -> Self {
        ConnectionTable { coeffs, labels: labels.map(String::from) }
    }

    pub fn zeros(labels: [&str; 3]) -> Self {
        ConnectionTable::new([[[0.0; 3]; 3]; 3], labels)
    }

    /// Table of a left-invariant frame under `conn`, projected with `g`;
    /// `signs[k] = g(E_k,E_k)`.
    pub fn from_frame<F>(frame: &[PairVec; 3], signs: [f64; 3], labels: [&str; 3], conn: F) -> Self
    where
        F: Fn(&PairVec, &PairVec) -> PairVec,
    {
        let mut t = ConnectionTable::zeros(labels);
        for i in 0..3 {
            for jj in 0..3 {
                let d = conn(&frame[i], &frame[jj]);
                for k in 0..3 {
                    t.coeffs[i][jj][k] = signs[k] * g(&d, &frame[k]);
                }
            }
        }
        t
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[i][j][k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.coeffs[i][j][k] = v;
    }

    pub fn max_diff(&self, other: &ConnectionTable) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m = m.max((self.coeffs[i][j][k] - other.coeffs[i][j][k]).abs());
                }
            }
        }
        m
    }

    /// Worst violation of `ε_k ω_ij^k + ε_j ω_ik^j = 0`.
    pub fn compatibility_residual(&self, signs: [f64; 3]) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let r = signs[k] * self.coeffs[i][j][k] + signs[j] * self.coeffs[i][k][j];
                    m = m.max(r.abs());
                }
            }
        }
        m
    }

    /// Nonzero entries as `(i, j, k, value)` with one-based indices.
    pub fn nonzero(&self, tol: f64) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = self.coeffs[i][j][k];
                    if v.abs() > tol {
                        out.push((i + 1, j + 1, k + 1, v));
                    }
                }
            }
        }
        out
    }
}
