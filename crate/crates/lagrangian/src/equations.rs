use nalgebra::Vector3;
use nk_structure::chart::{curvature, g, tensor_g};
use normal_forms::{Delta, OperatorPair};
use sl2_core::Sl2Point;

use crate::frame::{adapted_frame, extract_ab, frame_from_recipe, LagrangianFrame};
use crate::immersion::Immersion;
use crate::obstruction::codazzi_rhs;
use crate::sff::{along, frame_data, frame_data_at, FrameData, Tensor3, FD_STEP};
use crate::LagError;

/// `[i]` holds `Eᵢ` applied to every entry of a frame tensor.
pub type Derivative = [Tensor3; 3];

/// `Eᵢ(ω_jk^l)` and `Eᵢ(h_jk^l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivatives {
    pub omega: Derivative,
    pub h: Derivative,
}

fn zero_tensor() -> Tensor3 {
    [[[0.0; 3]; 3]; 3]
}

fn diff_tensor(f: &Tensor3, b: &Tensor3) -> Tensor3 {
    let mut out = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = (f[i][j][k] - b[i][j][k]) / (2.0 * FD_STEP);
            }
        }
    }
    out
}

/// Derivatives of `ω` and `h` along the frame; exactly zero when the chart
/// images of the domain frame are constant.
pub fn derivatives(imm: &dyn Immersion, data: &FrameData) -> Result<Derivatives, LagError> {
    let mut out = Derivatives { omega: [zero_tensor(); 3], h: [zero_tensor(); 3] };
    if imm.left_invariant_chart().is_some() {
        return Ok(out);
    }
    let recipe = data.frame.recipe();
    for i in 0..3 {
        let (f, b) = along(&data.frame, i, |u| frame_data_at(imm, u, &recipe))?;
        out.omega[i] = diff_tensor(&f.omega.coeffs, &b.omega.coeffs);
        out.h[i] = diff_tensor(&f.h.coeffs, &b.h.coeffs);
    }
    Ok(out)
}

fn ip(delta: Delta, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.dot(&(delta.matrix() * v))
}

/// `h(x, y)` as `JEₖ` coordinates.
fn h_of(data: &FrameData, x: &Vector3<f64>, y: &Vector3<f64>) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..3 {
                out[k] += x[a] * y[b] * data.h.coeffs[a][b][k];
            }
        }
    }
    out
}

/// Shape operator `S_ξ y` with `ξ = Σ ξₖ JEₖ`, from `g(S_ξ X, Y) = g(h(X,Y), ξ)`.
fn shape(data: &FrameData, xi: &Vector3<f64>, y: &Vector3<f64>) -> Vector3<f64> {
    let d = data.frame.delta.matrix();
    let dxi = d * xi;
    let lowered = Vector3::from_fn(|c, _| {
        let mut s = 0.0;
        for a in 0..3 {
            for n in 0..3 {
                s += y[a] * data.h.coeffs[a][c][n] * dxi[n];
            }
        }
        s
    });
    d * lowered
}

/// The algebraic part of the Gauss equation: the tangential curvature of
/// the ambient space restricted to the frame.
pub fn gauss_algebraic(pair: &OperatorPair, x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
    let dl = pair.delta;
    let (a, b) = (&pair.a, &pair.b);
    let t1 = x * ip(dl, y, z) - y * ip(dl, x, z);
    let t2 = (a * x) * ip(dl, &(a * y), z) - (a * y) * ip(dl, &(a * x), z) + (b * x) * ip(dl, &(b * y), z)
        - (b * y) * ip(dl, &(b * x), z);
    t1 * (-5.0 / 6.0) + t2 * (-2.0 / 3.0)
}

/// Right-hand side of the Gauss equation for `R(x,y)z`.
pub fn gauss_rhs(data: &FrameData, x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
    gauss_algebraic(&data.pair, x, y, z) - shape(data, &h_of(data, x, z), y) + shape(data, &h_of(data, y, z), x)
}

/// `R(Eᵢ,Eⱼ)Eₖ` of the induced connection, from `ω` and its derivatives.
pub fn intrinsic_curvature(data: &FrameData, dv: &Derivatives, i: usize, j: usize, k: usize) -> Vector3<f64> {
    let w = |a: usize, b: usize, c: usize| data.omega.get(a, b, c);
    Vector3::from_fn(|l, _| {
        let mut r = dv.omega[i][j][k][l] - dv.omega[j][i][k][l];
        for m in 0..3 {
            r += w(j, k, m) * w(i, m, l) - w(i, k, m) * w(j, m, l) - (w(i, j, m) - w(j, i, m)) * w(m, k, l);
        }
        r
    })
}

fn multilinear<F>(x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>, f: F) -> Vector3<f64>
where
    F: Fn(usize, usize, usize) -> Vector3<f64>,
{
    let mut out = Vector3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let c = x[i] * y[j] * z[k];
                if c != 0.0 {
                    out += f(i, j, k) * c;
                }
            }
        }
    }
    out
}

/// `g(R(x,y)y, x)/(g(x,x)g(y,y) − g(x,y)²)` with `R` from the Gauss equation.
pub fn sectional_curvature(data: &FrameData, x: &Vector3<f64>, y: &Vector3<f64>) -> Result<f64, LagError> {
    let dl = data.frame.delta;
    let q = ip(dl, x, x) * ip(dl, y, y) - ip(dl, x, y).powi(2);
    if q.abs() < 1e-10 {
        return Err(LagError::Degenerate { what: "tangent plane", value: q });
    }
    Ok(ip(dl, &gauss_rhs(data, x, y, y), x) / q)
}

/// The same quotient with the intrinsic curvature.
pub fn sectional_curvature_intrinsic(data: &FrameData, dv: &Derivatives, x: &Vector3<f64>, y: &Vector3<f64>) -> Result<f64, LagError> {
    let dl = data.frame.delta;
    let q = ip(dl, x, x) * ip(dl, y, y) - ip(dl, x, y).powi(2);
    if q.abs() < 1e-10 {
        return Err(LagError::Degenerate { what: "tangent plane", value: q });
    }
    let r = multilinear(x, y, y, |i, j, k| intrinsic_curvature(data, dv, i, j, k));
    Ok(ip(dl, &r, x) / q)
}

/// `max |R(Eᵢ,Eⱼ)Eₖ − RHS|` over frame triples.
pub fn gauss_residual_with(data: &FrameData, dv: &Derivatives) -> f64 {
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let d = intrinsic_curvature(data, dv, i, j, k) - gauss_rhs(data, &e[i], &e[j], &e[k]);
                m = m.max(d.amax());
            }
        }
    }
    m
}

/// `(∇̄_{Eᵢ}h)(Eⱼ,Eₖ)` as `JEₙ` coordinates.
fn nabla_h(data: &FrameData, dv: &Derivatives, jg: &[[Vector3<f64>; 3]; 3], i: usize, j: usize, k: usize) -> Vector3<f64> {
    let w = |a: usize, b: usize, c: usize| data.omega.get(a, b, c);
    let h = |a: usize, b: usize, c: usize| data.h.coeffs[a][b][c];
    Vector3::from_fn(|n, _| {
        let mut r = dv.h[i][j][k][n];
        for m in 0..3 {
            r += h(j, k, m) * (w(i, m, n) - jg[i][m][n]);
            r -= w(i, j, m) * h(m, k, n) + w(i, k, m) * h(j, m, n);
        }
        r
    })
}

/// `max |(∇̄_X h)(Y,Z) − (∇̄_Y h)(X,Z) − RHS|` over frame triples.
pub fn codazzi_residual_with(data: &FrameData, dv: &Derivatives) -> f64 {
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let jg = data.frame.jg_coefficients();
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let lhs = nabla_h(data, dv, &jg, i, j, k) - nabla_h(data, dv, &jg, j, i, k);
                m = m.max((lhs - codazzi_rhs(&data.pair, &e[i], &e[j], &e[k])).amax());
            }
        }
    }
    m
}

fn adapted_data(imm: &dyn Immersion, u: &Sl2Point) -> Result<(FrameData, Derivatives), LagError> {
    let (frame, _) = adapted_frame(imm, u)?;
    let data = frame_data(imm, &frame)?;
    let dv = derivatives(imm, &data)?;
    Ok((data, dv))
}

pub fn gauss_residual(imm: &dyn Immersion, u: &Sl2Point) -> Result<f64, LagError> {
    let (data, dv) = adapted_data(imm, u)?;
    Ok(gauss_residual_with(&data, &dv))
}

pub fn codazzi_residual(imm: &dyn Immersion, u: &Sl2Point) -> Result<f64, LagError> {
    let (data, dv) = adapted_data(imm, u)?;
    Ok(codazzi_residual_with(&data, &dv))
}

/// Largest gap between the Gauss/Codazzi algebraic terms and the tangential
/// and normal parts of the closed-form ambient curvature on the frame.
pub fn ambient_curvature_split_residual(data: &FrameData) -> f64 {
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let v = &data.frame.vectors;
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (t, n, rest) = data.frame.decompose(&curvature(&v[i], &v[j], &v[k]));
                let dt = t - gauss_algebraic(&data.pair, &e[i], &e[j], &e[k]);
                let dn = n - codazzi_rhs(&data.pair, &e[i], &e[j], &e[k]);
                m = m.max(dt.amax()).max(dn.amax()).max(rest);
            }
        }
    }
    m
}

/// `g(G(Eᵢ,Eⱼ),Eₖ) = 0` and total symmetry of `g(h(·,·),J·)`.
pub fn lagrprop_residual(data: &FrameData) -> f64 {
    let v = &data.frame.vectors;
    let mut m = 0.0f64;
    for a in v {
        for b in v {
            for c in v {
                m = m.max(g(&tensor_g(a, b), c).abs());
            }
        }
    }
    m.max(data.h.total_symmetry_residual())
}

fn require_d1(frame: &LagrangianFrame) -> Result<[f64; 3], LagError> {
    if frame.delta != Delta::D1 {
        return Err(LagError::NotDiagonalizable(format!("frame is Δ{}", frame.delta.index())));
    }
    Ok([-1.0, 1.0, 1.0])
}

fn wrap_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

fn doubled_angles(frame: &LagrangianFrame) -> Result<[f64; 3], LagError> {
    let pair = extract_ab(frame)?;
    Ok([0, 1, 2].map(|i| pair.b[(i, i)].atan2(pair.a[(i, i)])))
}

/// `max |Eᵢ(θⱼ) + δᵢδⱼ h_jj^i|` in a diagonalizing Δ₁ frame.
pub fn anglederi_residual(imm: &dyn Immersion, data: &FrameData) -> Result<f64, LagError> {
    let delta = require_d1(&data.frame)?;
    let recipe = data.frame.recipe();
    let mut m = 0.0f64;
    for i in 0..3 {
        let (f, b) = along(&data.frame, i, |u| doubled_angles(&frame_from_recipe(imm, u, &recipe)?))?;
        for j in 0..3 {
            let e_theta = 0.5 * wrap_pi(f[j] - b[j]) / (2.0 * FD_STEP);
            m = m.max((e_theta + delta[i] * delta[j] * data.h.get(j, j, i)).abs());
        }
    }
    Ok(m)
}

/// Index triples `(i, j, k)` for which the relation between `h`, `ω` and the
/// angles is checked.
pub const SFFC_INDICES: [(usize, usize, usize); 2] = [(0, 0, 1), (0, 1, 2)];

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `max |h_ij^k cos(θⱼ−θₖ) − (δₖ ε ε_ijk/√6 − ω_ij^k) sin(θⱼ−θₖ)|` over [`SFFC_INDICES`].
pub fn sffc_residual(data: &FrameData) -> Result<f64, LagError> {
    let delta = require_d1(&data.frame)?;
    let theta = [0, 1, 2].map(|i| 0.5 * data.pair.b[(i, i)].atan2(data.pair.a[(i, i)]));
    let eps = f64::from(data.frame.epsilon);
    let s6 = 6f64.sqrt();
    let mut m = 0.0f64;
    for (i, j, k) in SFFC_INDICES {
        let d = theta[j] - theta[k];
        let lhs = data.h.get(i, j, k) * d.cos();
        let rhs = (delta[k] * eps * levi_civita(i, j, k) / s6 - data.omega.get(i, j, k)) * d.sin();
        m = m.max((lhs - rhs).abs());
    }
    Ok(m)
}

/// `max |−δₖEₖ(h_jj^i) + δᵢEᵢ(h_jj^k) − δₖδᵢ Σₗ δₗ(ω_ik^l − ω_ki^l) h_jj^l|`.
pub fn compati_residual(data: &FrameData, dv: &Derivatives) -> Result<f64, LagError> {
    let delta = require_d1(&data.frame)?;
    let h = |a: usize, b: usize, c: usize| data.h.get(a, b, c);
    let w = |a: usize, b: usize, c: usize| data.omega.get(a, b, c);
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let lhs = -delta[k] * dv.h[k][j][j][i] + delta[i] * dv.h[i][j][j][k];
                let rhs: f64 = (0..3).map(|l| delta[l] * (w(i, k, l) - w(k, i, l)) * h(j, j, l)).sum::<f64>()
                    * delta[k]
                    * delta[i];
                m = m.max((lhs - rhs).abs());
            }
        }
    }
    Ok(m)
}
