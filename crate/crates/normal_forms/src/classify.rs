use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix3x2, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::cases::{wrap_2pi, NormalFormCase};
use crate::pair::OperatorPair;
use crate::spectrum::{
    complex_null_vector, null_space, null_vector, null_vector2, rank, scale3, spectrum, spectrum2, svd_sorted,
    Spectrum, Spectrum2, MERGE_TOL,
};
use crate::NfError;

/// `μ₁` below this counts as zero when separating cases 2 and 3.
pub const MU_ZERO_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub case: NormalFormCase,
    /// Columns are the new basis vectors in input coordinates.
    pub frame: Matrix3<f64>,
    pub a_form: Matrix3<f64>,
    pub b_form: Matrix3<f64>,
    /// `max |FᵀGF − Δ|`.
    pub gram_residual: f64,
    /// Distance of `(F⁻¹AF, F⁻¹BF)` from the displayed matrices of `case`.
    pub form_residual: f64,
}

struct Ctx {
    g: Matrix3<f64>,
    a: Matrix3<f64>,
    b: Matrix3<f64>,
    scale: f64,
}

impl Ctx {
    fn ip(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u.dot(&(self.g * v))
    }

    /// g-orthonormal basis of `span(w)` on which `A` and `B` are both scalar.
    fn gram_basis(&self, w: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
        let k = w.len();
        let gram = DMatrix::from_fn(k, k, |i, j| self.ip(&w[i], &w[j]));
        let eig = SymmetricEigen::new(gram);
        (0..k)
            .map(|c| (0..k).fold(Vector3::zeros(), |acc, i| acc + w[i] * eig.eigenvectors[(i, c)]))
            .collect()
    }

    fn restrict(&self, m: &Matrix3<f64>, w: &[Vector3<f64>]) -> Matrix2<f64> {
        let wm = Matrix3x2::from_columns(&[w[0], w[1]]);
        let pinv = (wm.transpose() * wm).try_inverse().expect("independent kernel basis") * wm.transpose();
        pinv * m * wm
    }

    fn split_plane(&self, w: &[Vector3<f64>]) -> Result<Vec<Vector3<f64>>, NfError> {
        let bw = self.restrict(&self.b, w);
        let lift = |c: nalgebra::Vector2<f64>| w[0] * c[0] + w[1] * c[1];
        match spectrum2(&bw)? {
            Spectrum2::Distinct(mu) => Ok(mu
                .iter()
                .map(|m| lift(null_vector2(&(bw - Matrix2::identity() * *m))))
                .collect()),
            Spectrum2::Double(m) => {
                if (bw - Matrix2::identity() * m).amax() <= MERGE_TOL * self.scale {
                    Ok(self.gram_basis(w))
                } else {
                    Err(unsupported_b_block())
                }
            }
            Spectrum2::Complex { .. } => Err(unsupported_b_block()),
        }
    }
}

fn unsupported_b_block() -> NfError {
    NfError::Unsupported("A is scalar on a plane where B is not diagonalizable; not among the displayed forms".into())
}

fn angle(mu: f64, lambda: f64) -> f64 {
    wrap_2pi(mu.atan2(lambda))
}

pub fn classify(pair: &OperatorPair) -> Result<Classification, NfError> {
    pair.validate()?;
    let ctx = Ctx { g: pair.gram(), a: pair.a, b: pair.b, scale: scale3(&pair.a).max(scale3(&pair.b)) };
    let id = Matrix3::identity();
    let sa = scale3(&pair.a);
    let (case, frame) = match spectrum(&pair.a)? {
        Spectrum::Distinct(ls) => {
            let vs = ls.iter().map(|l| null_vector(&(pair.a - id * *l))).collect::<Result<Vec<_>, _>>()?;
            type1(&ctx, vs)?
        }
        Spectrum::Double { double, simple } => {
            let n = pair.a - id * double;
            if rank(&n, sa) == 1 {
                let mut vs = ctx.split_plane(&null_space(&n, sa))?;
                vs.push(null_vector(&(pair.a - id * simple))?);
                type1(&ctx, vs)?
            } else {
                type2(&ctx, double, Some(simple))?
            }
        }
        Spectrum::Triple(m) => match rank(&(pair.a - id * m), sa) {
            0 => type1(&ctx, scalar_a_vectors(&ctx)?)?,
            1 => type2(&ctx, m, None)?,
            _ => type3(&ctx, m)?,
        },
        Spectrum::Complex { re, im, real } => type4(&ctx, re, im, real)?,
    };
    let finv = frame.try_inverse().ok_or_else(|| NfError::Degenerate("singular frame".into()))?;
    let a_form = finv * pair.a * frame;
    let b_form = finv * pair.b * frame;
    let gram_residual = (frame.transpose() * ctx.g * frame - case.delta().matrix()).amax();
    let form_residual = match case.matrices() {
        Ok((a, b)) => (a_form - a).amax().max((b_form - b).amax()),
        Err(_) => f64::INFINITY,
    };
    Ok(Classification { case, frame, a_form, b_form, gram_residual, form_residual })
}

fn scalar_a_vectors(ctx: &Ctx) -> Result<Vec<Vector3<f64>>, NfError> {
    let id = Matrix3::identity();
    let sb = scale3(&ctx.b);
    match spectrum(&ctx.b)? {
        Spectrum::Distinct(ms) => ms.iter().map(|m| null_vector(&(ctx.b - id * *m))).collect(),
        Spectrum::Double { double, simple } => {
            let n = ctx.b - id * double;
            if rank(&n, sb) != 1 {
                return Err(unsupported_b_block());
            }
            let mut vs = ctx.gram_basis(&null_space(&n, sb));
            vs.push(null_vector(&(ctx.b - id * simple))?);
            Ok(vs)
        }
        Spectrum::Triple(m) => {
            if rank(&(ctx.b - id * m), sb) != 0 {
                return Err(unsupported_b_block());
            }
            Ok(ctx.gram_basis(&[Vector3::x(), Vector3::y(), Vector3::z()]))
        }
        Spectrum::Complex { .. } => Err(unsupported_b_block()),
    }
}

fn orient(f: Matrix3<f64>) -> Matrix3<f64> {
    if f.determinant() < 0.0 {
        -f
    } else {
        f
    }
}

/// Eigenvectors → Δ₁ frame, timelike first, spacelike by angle.
fn type1(ctx: &Ctx, vs: Vec<Vector3<f64>>) -> Result<(NormalFormCase, Matrix3<f64>), NfError> {
    let mut items = Vec::with_capacity(3);
    for v in vs {
        let n = ctx.ip(&v, &v);
        if n.abs() <= 1e-10 * v.norm_squared() {
            return Err(NfError::Degenerate("null eigenvector in the diagonalizable branch".into()));
        }
        let e = v / n.abs().sqrt();
        let sign = n.signum();
        let l = sign * ctx.ip(&e, &(ctx.a * e));
        let m = sign * ctx.ip(&e, &(ctx.b * e));
        items.push((sign, angle(m, l), e));
    }
    if items.iter().filter(|(s, _, _)| *s < 0.0).count() != 1 {
        return Err(NfError::Degenerate("eigenbasis does not have one timelike vector".into()));
    }
    items.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let frame = orient(Matrix3::from_columns(&[items[0].2, items[1].2, items[2].2]));
    Ok((NormalFormCase::Case1 { angles: [items[0].1, items[1].1, items[2].1] }, frame))
}

/// Null rotation about `E₁` fixing the Δ₂ Gram matrix and the form of `A`
/// when `A` is scalar on `E₁`, `E₃`.
fn null_rotation(a: f64) -> Matrix3<f64> {
    Matrix3::new(1.0, -a * a / 2.0, a, 0.0, 1.0, 0.0, 0.0, -a, 1.0)
}

/// One Jordan block of size two at `l1`; `l2` is `None` when `A` has a single eigenvalue.
fn type2(ctx: &Ctx, l1: f64, l2: Option<f64>) -> Result<(NormalFormCase, Matrix3<f64>), NfError> {
    let id = Matrix3::identity();
    let n = ctx.a - id * l1;
    let x = match l2 {
        // ker N² = range(A − λ₂)
        Some(l2) => {
            let r = ctx.a - id * l2;
            (0..3)
                .map(|j| r.column(j).into_owned())
                .max_by(|u, v| (n * u).norm().total_cmp(&(n * v).norm()))
                .unwrap()
        }
        None => svd_sorted(&n)[0].1,
    };
    let kappa = ctx.ip(&(n * x), &x);
    if kappa <= 0.0 {
        return Err(NfError::Unsupported(format!(
            "Jordan block with g(Nx,x) = {kappa:e} ≤ 0 has no basis with the displayed +1 entry"
        )));
    }
    let x = x / kappa.sqrt();
    let e1 = n * x;
    let e2 = x - e1 * (ctx.ip(&x, &x) / 2.0);
    let e3 = match l2 {
        Some(l2) => null_vector(&(ctx.a - id * l2))?,
        None => null_space(&n, scale3(&ctx.a))
            .into_iter()
            .map(|w| w - e1 * ctx.ip(&w, &e2) - e2 * ctx.ip(&w, &e1))
            .max_by(|u, v| ctx.ip(u, u).total_cmp(&ctx.ip(v, v)))
            .ok_or_else(|| NfError::Degenerate("kernel of A − λ is too small".into()))?,
    };
    let n3 = ctx.ip(&e3, &e3);
    if n3 <= 1e-10 * e3.norm_squared() {
        return Err(NfError::Degenerate("third frame vector is not spacelike".into()));
    }
    let mut f = Matrix3::from_columns(&[e1, e2, e3 / n3.sqrt()]);
    let bf = |f: &Matrix3<f64>| f.try_inverse().map(|fi| fi * ctx.b * f);
    let mut b = bf(&f).ok_or_else(|| NfError::Degenerate("singular frame".into()))?;
    let (mu1, mu2) = (b[(0, 0)], b[(2, 2)]);
    let l2v = l2.unwrap_or(l1);
    if mu1.abs() < MU_ZERO_TOL {
        // t is removed by a null rotation, the sign of c by the sign of E₃
        if l2.is_none() && b[(0, 2)].abs() > MERGE_TOL {
            f *= null_rotation(b[(0, 1)] / (2.0 * b[(0, 2)]));
            b = bf(&f).unwrap();
        }
        if b[(0, 2)] < 0.0 {
            let c3 = -f.column(2);
            f.set_column(2, &c3);
            b = bf(&f).unwrap();
        }
        return Ok((NormalFormCase::Case3 { t: b[(0, 1)] }, orient(f)));
    }
    if l2.is_none() && (mu2 - mu1).abs() > MERGE_TOL {
        f *= null_rotation(b[(0, 2)] / (mu2 - mu1));
        b = bf(&f).unwrap();
    }
    let case = NormalFormCase::Case2 { angle1: angle(mu1, l1), angle2: angle(b[(2, 2)], l2v), c: b[(0, 2)] };
    Ok((case, orient(f)))
}

/// One Jordan block of size three at `l`.
fn type3(ctx: &Ctx, l: f64) -> Result<(NormalFormCase, Matrix3<f64>), NfError> {
    let n = ctx.a - Matrix3::identity() * l;
    let x = svd_sorted(&(n * n))[0].1;
    let kappa = ctx.ip(&(n * x), &(n * x));
    if kappa <= 0.0 {
        return Err(NfError::Unsupported(format!(
            "size-three Jordan block with g(Nx,Nx) = {kappa:e} ≤ 0 has no basis with the displayed +1 entries"
        )));
    }
    let x = x / kappa.sqrt();
    let (p, q) = (ctx.ip(&x, &(n * x)), ctx.ip(&x, &x));
    let a = -p / 2.0;
    let b = -(q + 2.0 * a * p + a * a) / 2.0;
    let x = x + n * x * a + n * n * x * b;
    let f = Matrix3::from_columns(&[n * n * x, x, n * x]);
    let bm = f.try_inverse().ok_or_else(|| NfError::Degenerate("singular frame".into()))? * ctx.b * f;
    Ok((NormalFormCase::Case4 { angle: angle(bm[(0, 0)], l) }, orient(f)))
}

/// Complex pair `re ± i·im` with real eigenvalue `real`.
fn type4(ctx: &Ctx, re: f64, im: f64, real: f64) -> Result<(NormalFormCase, Matrix3<f64>), NfError> {
    let e3 = null_vector(&(ctx.a - Matrix3::identity() * real))?;
    let n3 = ctx.ip(&e3, &e3);
    if n3 <= 0.0 {
        return Err(NfError::Degenerate("real eigenvector of a complex-type pair is not spacelike".into()));
    }
    let z = complex_null_vector(&ctx.a, Complex64::new(re, im))?;
    // rotate the phase so that the bilinear g(z,z) is real and positive
    let gz: Complex64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| z[i] * z[j] * ctx.g[(i, j)])
        .sum();
    let phase = Complex64::from_polar(1.0, -gz.arg() / 2.0);
    let z = z.map(|c| c * phase);
    let u = Vector3::new(z[0].re, z[1].re, z[2].re);
    let w = Vector3::new(z[0].im, z[1].im, z[2].im);
    let r = ctx.ip(&u, &u);
    if r <= 0.0 {
        return Err(NfError::Degenerate("complex eigenvector has degenerate real part".into()));
    }
    let f = Matrix3::from_columns(&[u / r.sqrt(), w / r.sqrt(), e3 / n3.sqrt()]);
    let bm = f.try_inverse().ok_or_else(|| NfError::Degenerate("singular frame".into()))? * ctx.b * f;
    let case = NormalFormCase::Case5 {
        angle1: angle(bm[(0, 0)], re),
        angle2: angle(bm[(2, 2)], real),
        x: im,
        y: bm[(0, 1)],
    };
    Ok((case, orient(f)))
}
