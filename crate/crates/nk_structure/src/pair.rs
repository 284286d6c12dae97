use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use sl2_core::{random_elem, random_point, Mat2, Sl2Elem, Sl2Point, I, J, K};

/// Tolerance for deciding that two base points coincide.
pub const BASE_TOL: f64 = 1e-12;

/// Lie-algebra coordinates `(α, β)` of a tangent vector `(aα, bβ)`.
///
/// Every structure tensor is left-invariant, so it acts on this pair alone.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PairVec {
    pub alpha: Sl2Elem,
    pub beta: Sl2Elem,
}

impl PairVec {
    pub const ZERO: PairVec = PairVec::new(Sl2Elem::ZERO, Sl2Elem::ZERO);

    pub const fn new(alpha: Sl2Elem, beta: Sl2Elem) -> Self {
        PairVec { alpha, beta }
    }

    /// Coordinates against `(i,0),(j,0),(k,0),(0,i),(0,j),(0,k)`.
    pub fn coords(self) -> [f64; 6] {
        let [a, b, c] = self.alpha.coords();
        let [d, e, f] = self.beta.coords();
        [a, b, c, d, e, f]
    }

    pub fn from_coords(v: [f64; 6]) -> Self {
        PairVec::new(
            Sl2Elem::from_coords(v[0], v[1], v[2]),
            Sl2Elem::from_coords(v[3], v[4], v[5]),
        )
    }

    pub fn scale(self, s: f64) -> Self {
        PairVec::new(self.alpha.scale(s), self.beta.scale(s))
    }

    /// Largest coordinate magnitude in the split-quaternion basis.
    pub fn max_abs(self) -> f64 {
        self.coords().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }
}

/// `(i,0),(j,0),(k,0),(0,i),(0,j),(0,k)`.
pub fn basis6() -> [PairVec; 6] {
    let z = Sl2Elem::ZERO;
    [
        PairVec::new(I, z),
        PairVec::new(J, z),
        PairVec::new(K, z),
        PairVec::new(z, I),
        PairVec::new(z, J),
        PairVec::new(z, K),
    ]
}

pub fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> PairVec {
    PairVec::new(random_elem(rng), random_elem(rng))
}

impl Add for PairVec {
    type Output = PairVec;
    fn add(self, o: PairVec) -> PairVec {
        PairVec::new(self.alpha + o.alpha, self.beta + o.beta)
    }
}

impl Sub for PairVec {
    type Output = PairVec;
    fn sub(self, o: PairVec) -> PairVec {
        PairVec::new(self.alpha - o.alpha, self.beta - o.beta)
    }
}

impl Neg for PairVec {
    type Output = PairVec;
    fn neg(self) -> PairVec {
        self.scale(-1.0)
    }
}

impl Mul<PairVec> for f64 {
    type Output = PairVec;
    fn mul(self, v: PairVec) -> PairVec {
        v.scale(self)
    }
}

impl fmt::Display for PairVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// A point `(a, b)` of SL(2,ℝ)×SL(2,ℝ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductPoint {
    pub a: Sl2Point,
    pub b: Sl2Point,
}

impl ProductPoint {
    pub const IDENTITY: ProductPoint = ProductPoint {
        a: Sl2Point::IDENTITY,
        b: Sl2Point::IDENTITY,
    };

    pub fn new(a: Sl2Point, b: Sl2Point) -> Self {
        ProductPoint { a, b }
    }

    pub fn distance(&self, o: &ProductPoint) -> f64 {
        self.a.distance(o.a).max(self.b.distance(o.b))
    }

    pub fn same_as(&self, o: &ProductPoint) -> bool {
        self.distance(o) <= BASE_TOL
    }
}

pub fn random_product_point<R: Rng + ?Sized>(rng: &mut R) -> ProductPoint {
    ProductPoint::new(random_point(rng), random_point(rng))
}

/// An element of ℝ⁸₄ = M(2,ℝ)², the flat space containing the product.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AmbientVector {
    pub x: Mat2,
    pub y: Mat2,
}

impl AmbientVector {
    pub fn new(x: Mat2, y: Mat2) -> Self {
        AmbientVector { x, y }
    }

    pub fn scale(self, s: f64) -> Self {
        AmbientVector::new(self.x.scale(s), self.y.scale(s))
    }

    pub fn max_abs(self) -> f64 {
        self.x.max_abs().max(self.y.max_abs())
    }
}

impl Add for AmbientVector {
    type Output = AmbientVector;
    fn add(self, o: AmbientVector) -> AmbientVector {
        AmbientVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for AmbientVector {
    type Output = AmbientVector;
    fn sub(self, o: AmbientVector) -> AmbientVector {
        AmbientVector::new(self.x - o.x, self.y - o.y)
    }
}

/// Tangent vector `(aα, bβ)` at `base = (a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentPair {
    pub base: ProductPoint,
    pub v: PairVec,
}

impl TangentPair {
    pub fn new(base: ProductPoint, v: PairVec) -> Self {
        TangentPair { base, v }
    }

    pub fn from_parts(base: ProductPoint, alpha: Sl2Elem, beta: Sl2Elem) -> Self {
        TangentPair::new(base, PairVec::new(alpha, beta))
    }

    pub fn alpha(&self) -> Sl2Elem {
        self.v.alpha
    }

    pub fn beta(&self) -> Sl2Elem {
        self.v.beta
    }

    /// The represented ambient vector `(aα, bβ)`.
    pub fn ambient(&self) -> AmbientVector {
        AmbientVector::new(
            self.base.a.translate(&self.v.alpha),
            self.base.b.translate(&self.v.beta),
        )
    }

    /// Tangential part of an ambient vector, returned in chart form.
    pub fn from_ambient(base: ProductPoint, w: &AmbientVector) -> Self {
        TangentPair::from_parts(base, base.a.pull_back(&w.x), base.b.pull_back(&w.y))
    }

    pub fn with(&self, v: PairVec) -> Self {
        TangentPair::new(self.base, v)
    }
}
