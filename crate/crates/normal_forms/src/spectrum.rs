//! Eigenvalue multiplicities and null vectors with explicit tolerance bands.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex64;

use crate::NfError;

/// Coefficient threshold for a triple eigenvalue, relative to `scale²`, `scale³`.
pub const TRIPLE_TOL: f64 = 1e-7;
/// Root gaps at or below this (times `scale`) are merged.
pub const MERGE_TOL: f64 = 1e-6;
/// Gaps in `(MERGE_TOL, AMBIGUITY_TOL]` are reported instead of guessed.
pub const AMBIGUITY_TOL: f64 = 1e-4;
/// Numeric rank threshold relative to `max(‖M‖, 1)`.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spectrum {
    /// Ascending.
    Distinct([f64; 3]),
    Double { double: f64, simple: f64 },
    Triple(f64),
    /// `re ± i·im` with `im > 0`, plus the real eigenvalue.
    Complex { re: f64, im: f64, real: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spectrum2 {
    Distinct([f64; 2]),
    Double(f64),
    Complex { re: f64, im: f64 },
}

pub fn scale3(m: &Matrix3<f64>) -> f64 {
    m.amax().max(1.0)
}

fn largest_real_root(s2: f64, s3: f64) -> f64 {
    // roots of λ³ − s2·λ − s3
    let disc = 4.0 * s2 * s2 * s2 - 27.0 * s3 * s3;
    let mut r = if s2 > 0.0 && disc >= 0.0 {
        let rad = 2.0 * (s2 / 3.0).sqrt();
        let c = (1.5 * s3 / s2 * (3.0 / s2).sqrt()).clamp(-1.0, 1.0);
        let phi = c.acos();
        (0..3)
            .map(|k| rad * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best })
    } else {
        let sq = (s3 * s3 / 4.0 - s2 * s2 * s2 / 27.0).max(0.0).sqrt();
        (s3 / 2.0 + sq).cbrt() + (s3 / 2.0 - sq).cbrt()
    };
    for _ in 0..3 {
        let d = 3.0 * r * r - s2;
        if d.abs() < 1e-300 {
            break;
        }
        r -= (r * r * r - s2 * r - s3) / d;
    }
    r
}

fn gap_decision(gap: f64, scale: f64) -> Result<bool, NfError> {
    if gap <= MERGE_TOL * scale {
        Ok(true)
    } else if gap <= AMBIGUITY_TOL * scale {
        Err(NfError::Ambiguous { gap })
    } else {
        Ok(false)
    }
}

pub fn spectrum(m: &Matrix3<f64>) -> Result<Spectrum, NfError> {
    let scale = scale3(m);
    let mean = m.trace() / 3.0;
    let n = m - Matrix3::identity() * mean;
    let s2 = 0.5 * (n * n).trace();
    let s3 = n.determinant();
    if s2.abs() <= TRIPLE_TOL * scale * scale && s3.abs() <= TRIPLE_TOL * scale.powi(3) {
        return Ok(Spectrum::Triple(mean));
    }
    let r = largest_real_root(s2, s3);
    let disc = 4.0 * s2 - 3.0 * r * r;
    let gap = disc.abs().sqrt();
    if gap_decision(gap, scale)? {
        let d = if s2.abs() > 1e-300 { -1.5 * s3 / s2 } else { -0.5 * r };
        return Ok(Spectrum::Double { double: d + mean, simple: r + mean });
    }
    if disc > 0.0 {
        let mut v = [r + mean, (-r + gap) / 2.0 + mean, (-r - gap) / 2.0 + mean];
        v.sort_by(f64::total_cmp);
        Ok(Spectrum::Distinct(v))
    } else {
        Ok(Spectrum::Complex { re: -r / 2.0 + mean, im: gap / 2.0, real: r + mean })
    }
}

pub fn spectrum2(m: &Matrix2<f64>) -> Result<Spectrum2, NfError> {
    let scale = m.amax().max(1.0);
    let half = m.trace() / 2.0;
    let disc = half * half - m.determinant();
    let gap = 2.0 * disc.abs().sqrt();
    if gap_decision(gap, scale)? {
        return Ok(Spectrum2::Double(half));
    }
    if disc > 0.0 {
        Ok(Spectrum2::Distinct([half - gap / 2.0, half + gap / 2.0]))
    } else {
        Ok(Spectrum2::Complex { re: half, im: gap / 2.0 })
    }
}

/// Singular values of `m`, descending, with the matching right singular vectors.
pub fn svd_sorted(m: &Matrix3<f64>) -> Vec<(f64, Vector3<f64>)> {
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut out: Vec<(f64, Vector3<f64>)> = (0..3)
        .map(|i| (svd.singular_values[i], vt.row(i).transpose()))
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

pub fn rank(m: &Matrix3<f64>, reference: f64) -> usize {
    let tol = RANK_TOL * reference.max(1.0);
    svd_sorted(m).iter().filter(|(s, _)| *s > tol).count()
}

/// Orthonormal (Euclidean) basis of the numeric kernel.
pub fn null_space(m: &Matrix3<f64>, reference: f64) -> Vec<Vector3<f64>> {
    let tol = RANK_TOL * reference.max(1.0);
    svd_sorted(m).into_iter().filter(|(s, _)| *s <= tol).map(|(_, v)| v).collect()
}

/// Kernel vector of a rank-2 matrix from the best-conditioned row cross product.
pub fn null_vector(m: &Matrix3<f64>) -> Result<Vector3<f64>, NfError> {
    let rows: Vec<Vector3<f64>> = (0..3).map(|i| m.row(i).transpose()).collect();
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| rows[i].cross(&rows[j]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    if best.norm() <= 1e-14 * m.amax().max(1.0).powi(2) {
        return Err(NfError::Degenerate("kernel is not one-dimensional".into()));
    }
    Ok(best.normalize())
}

fn ccross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn cnorm(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kernel vector of `m − λ·Id` for complex `λ`.
pub fn complex_null_vector(m: &Matrix3<f64>, lambda: Complex64) -> Result<[Complex64; 3], NfError> {
    let row = |i: usize| -> [Complex64; 3] {
        let mut r = [Complex64::new(0.0, 0.0); 3];
        for (j, slot) in r.iter_mut().enumerate() {
            *slot = Complex64::new(m[(i, j)], 0.0) - if i == j { lambda } else { Complex64::new(0.0, 0.0) };
        }
        r
    };
    let rows = [row(0), row(1), row(2)];
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| ccross(&rows[i], &rows[j]))
        .max_by(|a, b| cnorm(a).total_cmp(&cnorm(b)))
        .unwrap();
    let n = cnorm(&best);
    if n <= 1e-14 {
        return Err(NfError::Degenerate("complex kernel is not one-dimensional".into()));
    }
    Ok(best.map(|z| z / n))
}

/// Kernel vector of a 2×2 matrix.
pub fn null_vector2(m: &Matrix2<f64>) -> Vector2<f64> {
    let a = Vector2::new(-m[(0, 1)], m[(0, 0)]);
    let b = Vector2::new(-m[(1, 1)], m[(1, 0)]);
    if a.norm() >= b.norm() {
        a.normalize()
    } else {
        b.normalize()
    }
}
