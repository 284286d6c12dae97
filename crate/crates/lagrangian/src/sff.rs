use connection::{nk_connection_chart, ConnectionTable};
use nalgebra::Matrix3;
use nk_structure::PairVec;
use normal_forms::{Delta, OperatorPair};
use sl2_core::{exp_sl2, Sl2Point};

use crate::frame::{build_frame, extract_ab, frame_from_recipe, FrameRecipe, LagrangianFrame};
use crate::immersion::Immersion;
use crate::LagError;

/// Step for derivatives along frame directions.
pub const FD_STEP: f64 = 1e-4;
/// Largest part of `∇̃_{Eᵢ}Eⱼ` allowed outside `TM ⊕ JTM`.
pub const PROJECTION_TOL: f64 = 1e-6;

pub type Tensor3 = [[[f64; 3]; 3]; 3];

/// `h(Eᵢ,Eⱼ) = Σₖ h_ij^k JEₖ`, indices from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    pub coeffs: Tensor3,
    pub delta: Delta,
}

impl SecondFundamentalForm {
    pub fn zeros(delta: Delta) -> Self {
        SecondFundamentalForm { coeffs: [[[0.0; 3]; 3]; 3], delta }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[i][j][k]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn symmetry_residual(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m = m.max((self.coeffs[i][j][k] - self.coeffs[j][i][k]).abs());
                }
            }
        }
        m
    }

    /// `σ_ijk = g(h(Eᵢ,Eⱼ), JEₖ)`.
    pub fn cubic_form(&self) -> Tensor3 {
        let d = self.delta.matrix();
        let mut s = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s[i][j][k] = (0..3).map(|m| self.coeffs[i][j][m] * d[(m, k)]).sum();
                }
            }
        }
        s
    }

    /// Largest failure of `σ` to be totally symmetric.
    pub fn total_symmetry_residual(&self) -> f64 {
        let s = self.cubic_form();
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m = m.max((s[i][j][k] - s[j][i][k]).abs()).max((s[i][j][k] - s[i][k][j]).abs());
                }
            }
        }
        m
    }
}

/// Largest component of the Δ-trace `Σ Δ⁻¹ᵢⱼ h_ij^k`; for Δ₁ this is
/// `−h₁₁ᵏ + h₂₂ᵏ + h₃₃ᵏ`.
pub fn minimality_residual(h: &SecondFundamentalForm) -> f64 {
    let dinv = h.delta.matrix();
    (0..3)
        .map(|k| {
            let mut t = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    t += dinv[(i, j)] * h.coeffs[i][j][k];
                }
            }
            t.abs()
        })
        .fold(0.0, f64::max)
}

/// Everything first-order about the immersion at one point of one frame.
#[derive(Clone, Debug)]
pub struct FrameData {
    pub frame: LagrangianFrame,
    pub pair: OperatorPair,
    pub omega: ConnectionTable,
    pub h: SecondFundamentalForm,
    pub projection_residual: f64,
}

/// Evaluates `eval` at `u·exp(±FD_STEP·wᵢ)`.
pub fn along<T, F>(frame: &LagrangianFrame, i: usize, eval: F) -> Result<(T, T), LagError>
where
    F: Fn(&Sl2Point) -> Result<T, LagError>,
{
    let w = frame.direction(i);
    let fwd = eval(&(frame.u * exp_sl2(&w.scale(FD_STEP))))?;
    let bwd = eval(&(frame.u * exp_sl2(&w.scale(-FD_STEP))))?;
    Ok((fwd, bwd))
}

/// `∇̃_{Eᵢ}Eⱼ` in chart form: the derivative of the chart coordinates of
/// `Eⱼ` along `Eᵢ` plus the connection on constant coordinates. The first
/// term vanishes when the chart images of the domain frame are constant.
pub fn covariant_derivatives(imm: &dyn Immersion, frame: &LagrangianFrame) -> Result<[[PairVec; 3]; 3], LagError> {
    let constant = imm.left_invariant_chart().is_some();
    let recipe = frame.recipe();
    let mut out = [[PairVec::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        let moved = if constant {
            None
        } else {
            Some(along(frame, i, |u| frame_from_recipe(imm, u, &recipe))?)
        };
        for (jj, slot) in row.iter_mut().enumerate() {
            let d = match &moved {
                None => PairVec::ZERO,
                Some((f, b)) => (f.vectors[jj] - b.vectors[jj]).scale(0.5 / FD_STEP),
            };
            *slot = d + nk_connection_chart(&frame.vectors[i], &frame.vectors[jj]);
        }
    }
    Ok(out)
}

/// Splits `∇̃_{Eᵢ}Eⱼ = Σ ω_ij^k Eₖ + Σ h_ij^k JEₖ`.
pub fn frame_data(imm: &dyn Immersion, frame: &LagrangianFrame) -> Result<FrameData, LagError> {
    let nabla = covariant_derivatives(imm, frame)?;
    let mut omega = ConnectionTable::zeros(["E1", "E2", "E3"]);
    let mut h = SecondFundamentalForm::zeros(frame.delta);
    let mut worst = 0.0f64;
    for i in 0..3 {
        for jj in 0..3 {
            let (t, n, rest) = frame.decompose(&nabla[i][jj]);
            for k in 0..3 {
                omega.set(i, jj, k, t[k]);
                h.coeffs[i][jj][k] = n[k];
            }
            worst = worst.max(rest);
        }
    }
    if worst > PROJECTION_TOL {
        return Err(LagError::Projection { what: "∇̃_{Eᵢ}Eⱼ", residual: worst });
    }
    Ok(FrameData { pair: extract_ab(frame)?, frame: frame.clone(), omega, h, projection_residual: worst })
}

pub fn frame_data_at(imm: &dyn Immersion, u: &Sl2Point, recipe: &FrameRecipe) -> Result<FrameData, LagError> {
    frame_data(imm, &frame_from_recipe(imm, u, recipe)?)
}

/// `h` in the Δ₁ frame of [`build_frame`].
pub fn second_fundamental_form(imm: &dyn Immersion, u: &Sl2Point) -> Result<SecondFundamentalForm, LagError> {
    Ok(frame_data(imm, &build_frame(imm, u)?)?.h)
}

/// Connection coefficients after a constant change of frame `E'ᵢ = Σₐ f[(a,i)] Eₐ`.
pub fn change_frame(table: &ConnectionTable, f: &Matrix3<f64>, labels: [&str; 3]) -> Result<ConnectionTable, LagError> {
    let finv = f.try_inverse().ok_or(LagError::Degenerate { what: "frame change", value: 0.0 })?;
    let mut out = ConnectionTable::zeros(labels);
    for i in 0..3 {
        for jj in 0..3 {
            for k in 0..3 {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            s += f[(a, i)] * f[(b, jj)] * table.get(a, b, c) * finv[(k, c)];
                        }
                    }
                }
                out.set(i, jj, k, s);
            }
        }
    }
    Ok(out)
}

/// `F₁ = −E₁`, `F₂ = −cos φ E₂ − sin φ E₃`, `F₃ = sin φ E₂ − cos φ E₃` as columns.
pub fn example2_f_transition(phi: f64) -> Matrix3<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    Matrix3::new(-1.0, 0.0, 0.0, 0.0, -c, s, 0.0, -s, -c)
}
