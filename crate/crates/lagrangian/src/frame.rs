use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use nk_structure::chart::{g, j, p, tensor_g};
use nk_structure::{PairVec, ProductPoint, TangentPair};
use normal_forms::{classify, AngleTriple, Classification, Delta, NormalFormCase, OperatorPair};
use sl2_core::{Sl2Elem, Sl2Point};

use crate::immersion::{Immersion, DOMAIN_FRAME};
use crate::LagError;

/// Above this `max |g(df Xᵢ, J df Xⱼ)|` a map is not treated as Lagrangian.
pub const LAGRANGIAN_TOL: f64 = 1e-6;
/// Largest residual of `P Eᵢ − Σ Aₖᵢ Eₖ − Σ Bₖᵢ JEₖ`.
pub const DECOMPOSITION_TOL: f64 = 1e-6;
/// Off-diagonal size below which a Δ₁ pair is read as already diagonal.
pub const DIAGONAL_TOL: f64 = 1e-7;
/// √(2/3), the size of `JG` on an orthonormal pair.
pub const SQRT_2_3: f64 = 0.816_496_580_927_726;

/// The chart images `df(X₁), df(X₂), df(X₃)` at `u`.
pub fn basis_differentials(imm: &dyn Immersion, u: &Sl2Point) -> Result<[TangentPair; 3], LagError> {
    Ok([
        imm.differential(u, &DOMAIN_FRAME[0])?,
        imm.differential(u, &DOMAIN_FRAME[1])?,
        imm.differential(u, &DOMAIN_FRAME[2])?,
    ])
}

fn gram_of(vs: &[PairVec; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|a, b| g(&vs[a], &vs[b]))
}

/// `max |g(df(Xᵢ), J df(Xⱼ))|` over the basis.
pub fn lagrangian_residual(imm: &dyn Immersion, u: &Sl2Point) -> Result<f64, LagError> {
    let d = basis_differentials(imm, u)?.map(|t| t.v);
    Ok(lagrangian_defect(&d))
}

fn lagrangian_defect(vs: &[PairVec; 3]) -> f64 {
    let mut m = 0.0f64;
    for a in vs {
        for b in vs {
            m = m.max(g(a, &j(b)).abs());
        }
    }
    m
}

/// A Δ-orthonormal frame along the image of `u`.
///
/// `coeffs = d1_coeffs · transition`, where the columns of `d1_coeffs` write a
/// Δ₁ frame in terms of `df(X₁), df(X₂), df(X₃)` and `transition` maps it to
/// this frame.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianFrame {
    pub u: Sl2Point,
    pub base: ProductPoint,
    pub vectors: [PairVec; 3],
    pub d1_coeffs: Matrix3<f64>,
    pub transition: Matrix3<f64>,
    pub delta: Delta,
    pub epsilon: i8,
}

/// How to rebuild a frame at nearby points so that it varies smoothly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameRecipe {
    pub d1_coeffs: Matrix3<f64>,
    pub transition: Matrix3<f64>,
    pub delta: Delta,
}

impl LagrangianFrame {
    pub fn coeffs(&self) -> Matrix3<f64> {
        self.d1_coeffs * self.transition
    }

    pub fn recipe(&self) -> FrameRecipe {
        FrameRecipe { d1_coeffs: self.d1_coeffs, transition: self.transition, delta: self.delta }
    }

    pub fn tangent(&self, i: usize) -> TangentPair {
        TangentPair::new(self.base, self.vectors[i])
    }

    /// `Σ cᵢ Eᵢ`.
    pub fn combine(&self, c: &Vector3<f64>) -> PairVec {
        self.vectors[0].scale(c[0]) + self.vectors[1].scale(c[1]) + self.vectors[2].scale(c[2])
    }

    /// `Σ cᵢ JEᵢ`.
    pub fn combine_normal(&self, c: &Vector3<f64>) -> PairVec {
        j(&self.combine(c))
    }

    /// The domain direction `wᵢ` with `df(wᵢ) = Eᵢ`.
    pub fn direction(&self, i: usize) -> Sl2Elem {
        let c = self.coeffs();
        DOMAIN_FRAME[0].scale(c[(0, i)]) + DOMAIN_FRAME[1].scale(c[(1, i)]) + DOMAIN_FRAME[2].scale(c[(2, i)])
    }

    pub fn gram(&self) -> Matrix3<f64> {
        gram_of(&self.vectors)
    }

    pub fn gram_residual(&self) -> f64 {
        (self.gram() - self.delta.matrix()).amax()
    }

    pub fn lagrangian_residual(&self) -> f64 {
        lagrangian_defect(&self.vectors)
    }

    /// Tangential and normal coordinates of `v` and the size of what is left.
    pub fn decompose(&self, v: &PairVec) -> (Vector3<f64>, Vector3<f64>, f64) {
        let dinv = self.delta.matrix();
        let t = dinv * Vector3::from_fn(|l, _| g(v, &self.vectors[l]));
        let n = dinv * Vector3::from_fn(|l, _| g(v, &j(&self.vectors[l])));
        let rest = *v - self.combine(&t) - self.combine_normal(&n);
        (t, n, rest.max_abs())
    }

    /// `T[a][b]` = tangential coordinates of `JG(E_a, E_b)`.
    pub fn jg_coefficients(&self) -> [[Vector3<f64>; 3]; 3] {
        let mut out = [[Vector3::zeros(); 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] = self.decompose(&j(&tensor_g(&self.vectors[a], &self.vectors[b]))).0;
            }
        }
        out
    }

    /// Distance of `JG(Eₐ,E_b)` from the tabulated `ε√(2/3)E_c` values.
    pub fn jg_table_residual(&self) -> f64 {
        let want = jg_table(self.delta);
        let eps = f64::from(self.epsilon);
        let mut m = 0.0f64;
        for (a, b, c, s) in want {
            let got = j(&tensor_g(&self.vectors[a], &self.vectors[b]));
            m = m.max((got - self.vectors[c].scale(eps * s * SQRT_2_3)).max_abs());
        }
        m
    }

    /// `E'ᵢ = Σₐ f[(a,i)] Eₐ`, declared to be `delta`-orthonormal.
    pub fn transform(&self, f: &Matrix3<f64>, delta: Delta) -> LagrangianFrame {
        let mut out = self.clone();
        out.vectors = [0, 1, 2].map(|i| self.combine(&f.column(i).into_owned()));
        out.transition = self.transition * f;
        out.delta = delta;
        out.epsilon = orientation_sign(&out.vectors);
        out
    }

    /// Largest 2×2 minor of the `(α, β)` coordinate matrix of each vector.
    pub fn linear_dependence_residual(&self) -> f64 {
        let mut m = 0.0f64;
        for v in &self.vectors {
            let (a, b) = (v.alpha.coords(), v.beta.coords());
            for r in 0..3 {
                for s in r + 1..3 {
                    m = m.max((a[r] * b[s] - a[s] * b[r]).abs());
                }
            }
        }
        m
    }
}

/// `(a, b, c, sign)` meaning `JG(Eₐ,E_b) = sign·ε√(2/3)E_c`.
pub fn jg_table(delta: Delta) -> [(usize, usize, usize, f64); 3] {
    match delta {
        Delta::D1 => [(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, -1.0)],
        Delta::D2 => [(0, 1, 2, 1.0), (0, 2, 0, -1.0), (1, 2, 1, 1.0)],
        Delta::D3 => [(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, 1.0)],
    }
}

/// `g(JG(E₁,E₂), E₃)/√(2/3)`, which is `±1` on a Δ-orthonormal Lagrangian frame.
pub fn orientation_value(vs: &[PairVec; 3]) -> f64 {
    g(&j(&tensor_g(&vs[0], &vs[1])), &vs[2]) / SQRT_2_3
}

fn orientation_sign(vs: &[PairVec; 3]) -> i8 {
    if orientation_value(vs) >= 0.0 {
        1
    } else {
        -1
    }
}

const SIGNS_D1: [f64; 3] = [-1.0, 1.0, 1.0];

/// Orthonormalizes `start` in order against `gram`, the first vector
/// timelike; vectors that become negligible are skipped.
fn gram_schmidt_d1(gram: &Matrix3<f64>, start: &[Vector3<f64>]) -> Result<Matrix3<f64>, LagError> {
    let ip = |a: &Vector3<f64>, b: &Vector3<f64>| a.dot(&(gram * b));
    let scale = gram.amax();
    let mut out: Vec<Vector3<f64>> = Vec::with_capacity(3);
    for cand in start {
        if out.len() == 3 {
            break;
        }
        let mut w = *cand;
        for (k, e) in out.iter().enumerate() {
            w -= e * (SIGNS_D1[k] * ip(&w, e));
        }
        let want = SIGNS_D1[out.len()];
        let n = want * ip(&w, &w);
        let negligible = w.norm() <= 1e-8 * cand.norm() || n <= 1e-12 * scale * w.norm_squared();
        if negligible {
            if out.is_empty() {
                return Err(LagError::Degenerate { what: "timelike seed", value: n });
            }
            continue;
        }
        out.push(w / n.sqrt());
    }
    if out.len() < 3 {
        return Err(LagError::Degenerate { what: "induced metric rank", value: out.len() as f64 });
    }
    Ok(Matrix3::from_columns(&out))
}

fn timelike_seed(gram: &Matrix3<f64>) -> Result<Vector3<f64>, LagError> {
    let scale = gram.amax();
    let (idx, min) = (0..3).map(|a| (a, gram[(a, a)])).fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    if min < -1e-8 * scale {
        return Ok(Vector3::ith(idx, 1.0));
    }
    let eig = SymmetricEigen::new(*gram);
    let (k, lam) = eig.eigenvalues.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
    if lam >= -1e-12 * scale {
        return Err(LagError::Degenerate { what: "induced metric has no timelike direction", value: lam });
    }
    let mut v = eig.eigenvectors.column(k).into_owned();
    let big = v.iamax();
    if v[big] < 0.0 {
        v = -v;
    }
    Ok(v)
}

fn frame_from_coeffs(
    u: &Sl2Point,
    base: ProductPoint,
    d: &[PairVec; 3],
    d1_coeffs: Matrix3<f64>,
    transition: Matrix3<f64>,
    delta: Delta,
) -> LagrangianFrame {
    let c = d1_coeffs * transition;
    let vectors = [0, 1, 2].map(|i| d[0].scale(c[(0, i)]) + d[1].scale(c[(1, i)]) + d[2].scale(c[(2, i)]));
    let epsilon = orientation_sign(&vectors);
    LagrangianFrame { u: *u, base, vectors, d1_coeffs, transition, delta, epsilon }
}

fn checked_differentials(imm: &dyn Immersion, u: &Sl2Point) -> Result<(ProductPoint, [PairVec; 3]), LagError> {
    let d = basis_differentials(imm, u)?;
    let vs = d.map(|t| t.v);
    let r = lagrangian_defect(&vs);
    if r > LAGRANGIAN_TOL {
        return Err(LagError::NotLagrangian { residual: r });
    }
    let gram = gram_of(&vs);
    let det = gram.determinant();
    if det.abs() < 1e-12 * gram.amax().powi(3).max(1e-300) {
        return Err(LagError::Degenerate { what: "induced metric", value: det });
    }
    Ok((d[0].base, vs))
}

/// Δ₁-orthonormal frame from the differentials at `u`: a timelike seed
/// first, then Gram–Schmidt in the order `df(X₁), df(X₂), df(X₃)`, and the
/// whole frame negated if needed so that `JG(E₁,E₂) = +√(2/3)E₃`.
pub fn build_frame(imm: &dyn Immersion, u: &Sl2Point) -> Result<LagrangianFrame, LagError> {
    let (base, d) = checked_differentials(imm, u)?;
    let gram = gram_of(&d);
    let seed = timelike_seed(&gram)?;
    let start = [seed, Vector3::x(), Vector3::y(), Vector3::z()];
    let mut c = gram_schmidt_d1(&gram, &start)?;
    let frame = frame_from_coeffs(u, base, &d, c, Matrix3::identity(), Delta::D1);
    if frame.epsilon < 0 {
        c = -c;
    }
    Ok(frame_from_coeffs(u, base, &d, c, Matrix3::identity(), Delta::D1))
}

/// The frame of `recipe` at `u`: re-orthonormalized Δ₁ part, then the fixed transition.
pub fn frame_from_recipe(imm: &dyn Immersion, u: &Sl2Point, recipe: &FrameRecipe) -> Result<LagrangianFrame, LagError> {
    let (base, d) = checked_differentials(imm, u)?;
    let gram = gram_of(&d);
    let cols: Vec<Vector3<f64>> = (0..3).map(|i| recipe.d1_coeffs.column(i).into_owned()).collect();
    let c = gram_schmidt_d1(&gram, &cols)?;
    Ok(frame_from_coeffs(u, base, &d, c, recipe.transition, recipe.delta))
}

/// `A`, `B` with `P Eᵢ = Σₖ Aₖᵢ Eₖ + Σₖ Bₖᵢ JEₖ`.
pub fn extract_ab(frame: &LagrangianFrame) -> Result<OperatorPair, LagError> {
    let mut a = Matrix3::zeros();
    let mut b = Matrix3::zeros();
    let mut worst = 0.0f64;
    for i in 0..3 {
        let (t, n, rest) = frame.decompose(&p(&frame.vectors[i]));
        a.set_column(i, &t);
        b.set_column(i, &n);
        worst = worst.max(rest);
    }
    if worst > DECOMPOSITION_TOL {
        return Err(LagError::Projection { what: "P Eᵢ", residual: worst });
    }
    Ok(OperatorPair::new(a, b, frame.delta))
}

/// A frame in which `(A, B)` takes its normal form, with the classification.
pub fn adapted_frame(imm: &dyn Immersion, u: &Sl2Point) -> Result<(LagrangianFrame, Classification), LagError> {
    let base = build_frame(imm, u)?;
    let pair = extract_ab(&base)?;
    if pair.delta == Delta::D1 && is_diagonal(&pair) {
        let case = NormalFormCase::Case1 { angles: angle_functions(&pair)?.angles };
        let (a0, b0) = case.matrices()?;
        let class = Classification {
            case,
            frame: Matrix3::identity(),
            a_form: pair.a,
            b_form: pair.b,
            gram_residual: base.gram_residual(),
            form_residual: (pair.a - a0).amax().max((pair.b - b0).amax()),
        };
        return Ok((base, class));
    }
    let class = classify(&pair)?;
    let delta = class.case.delta();
    let mut f = class.frame;
    if base.transform(&f, delta).epsilon < 0 {
        f = -f;
    }
    Ok((base.transform(&f, delta), class))
}

fn is_diagonal(pair: &OperatorPair) -> bool {
    let off = |m: &Matrix3<f64>| (0..3).flat_map(|r| (0..3).map(move |c| (r, c))).filter(|(r, c)| r != c).map(|rc| m[rc].abs()).fold(0.0, f64::max);
    off(&pair.a).max(off(&pair.b)) <= DIAGONAL_TOL
}

/// Doubled angles `2θᵢ = atan2(Bᵢᵢ, Aᵢᵢ)` of a diagonalizable pair, read in
/// frame order when the Δ₁ pair is already diagonal.
pub fn angle_functions(pair: &OperatorPair) -> Result<AngleTriple, LagError> {
    if pair.delta == Delta::D1 && is_diagonal(pair) {
        pair.validate()?;
        return Ok(AngleTriple::new([0, 1, 2].map(|i| pair.b[(i, i)].atan2(pair.a[(i, i)]))));
    }
    match classify(pair)?.case {
        NormalFormCase::Case1 { angles } => Ok(AngleTriple::new(angles)),
        other => Err(LagError::NotDiagonalizable(other.tag().to_string())),
    }
}

/// Angles at `u` from the adapted frame.
pub fn angles_at(imm: &dyn Immersion, u: &Sl2Point) -> Result<AngleTriple, LagError> {
    let (frame, _) = adapted_frame(imm, u)?;
    angle_functions(&extract_ab(&frame)?)
}
