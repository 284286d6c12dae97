use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nk_structure::{Isometry, PairVec, ProductPoint, TangentPair};
use serde::Deserialize;
use sl2_core::{exp_sl2, Mat2, Sl2Elem, Sl2Point, I, J, K};

use crate::LagError;

/// Central-difference step for differentials of numeric maps.
pub const DIFF_STEP: f64 = 1e-5;
/// Differentials with all chart coordinates below this are degenerate.
pub const DEGENERATE_TOL: f64 = 1e-10;

/// The left-invariant frame `X₁, X₂, X₃` of SL(2,ℝ) at the identity.
pub const DOMAIN_FRAME: [Sl2Elem; 3] = [I, J, K];

/// A map `u ↦ (p(u), q(u))` from SL(2,ℝ) into the product.
pub trait Immersion: Send + Sync {
    fn name(&self) -> String;

    fn point(&self, u: &Sl2Point) -> Result<ProductPoint, LagError>;

    fn step(&self) -> f64 {
        DIFF_STEP
    }

    /// Chart images of `X₁, X₂, X₃` when they do not depend on `u`.
    fn left_invariant_chart(&self) -> Option<[PairVec; 3]> {
        None
    }

    /// `df_u(uv)` in chart form at `f(u)`.
    fn differential(&self, u: &Sl2Point, v: &Sl2Elem) -> Result<TangentPair, LagError> {
        if v.max_abs() == 0.0 {
            return Err(LagError::ZeroDirection);
        }
        let base = self.point(u)?;
        let out = match self.left_invariant_chart() {
            Some(chart) => {
                let [x, y, z] = v.coords();
                TangentPair::new(base, chart[0].scale(x) + chart[1].scale(y) + chart[2].scale(z))
            }
            None => {
                let h = self.step();
                let fwd = self.point(&(*u * exp_sl2(&v.scale(h))))?;
                let bwd = self.point(&(*u * exp_sl2(&v.scale(-h))))?;
                let dx = (fwd.a.mat() - bwd.a.mat()).scale(0.5 / h);
                let dy = (fwd.b.mat() - bwd.b.mat()).scale(0.5 / h);
                TangentPair::from_parts(base, base.a.pull_back(&dx), base.b.pull_back(&dy))
            }
        };
        checked(out)
    }
}

fn checked(t: TangentPair) -> Result<TangentPair, LagError> {
    if !t.v.is_finite() {
        return Err(LagError::NonFinite("differential".into()));
    }
    if t.v.max_abs() < DEGENERATE_TOL {
        return Err(LagError::Degenerate { what: "differential", value: t.v.max_abs() });
    }
    Ok(t)
}

/// The three totally geodesic examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    /// `u ↦ (Id, u)`
    One,
    /// `u ↦ (u, iui)`
    Two,
    /// `u ↦ (u, kuk)`
    Three,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::One, Example::Two, Example::Three];

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "example1" => Some(Example::One),
            "example2" => Some(Example::Two),
            "example3" => Some(Example::Three),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Example::One => "example1",
            Example::Two => "example2",
            Example::Three => "example3",
        }
    }

    /// Doubled angle functions of the example.
    pub fn expected_angles(self) -> [f64; 3] {
        use std::f64::consts::PI;
        match self {
            Example::One => [4.0 * PI / 3.0; 3],
            Example::Two => [0.0, PI, PI],
            Example::Three => [PI, PI, 0.0],
        }
    }

    fn chart(self, v: Sl2Elem) -> PairVec {
        let conj = |c: Sl2Elem, s: f64| Sl2Elem::project(&(c.mat() * v.mat() * c.mat()).scale(s));
        match self {
            Example::One => PairVec::new(Sl2Elem::ZERO, v),
            Example::Two => PairVec::new(v, conj(I, -1.0)),
            Example::Three => PairVec::new(v, conj(K, 1.0)),
        }
    }
}

impl Immersion for Example {
    fn name(&self) -> String {
        self.label().to_string()
    }

    fn point(&self, u: &Sl2Point) -> Result<ProductPoint, LagError> {
        let m = u.mat();
        Ok(match self {
            Example::One => ProductPoint::new(Sl2Point::IDENTITY, *u),
            Example::Two => ProductPoint::new(*u, Sl2Point::new(I.mat() * m * I.mat())?),
            Example::Three => ProductPoint::new(*u, Sl2Point::new(K.mat() * m * K.mat())?),
        })
    }

    fn left_invariant_chart(&self) -> Option<[PairVec; 3]> {
        Some(DOMAIN_FRAME.map(|v| self.chart(v)))
    }
}

/// A constant factor: `"id"`, `"i"`, `"j"`, `"k"` or an explicit 2×2 matrix.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Factor {
    Named(String),
    Matrix([[f64; 2]; 2]),
}

impl Default for Factor {
    fn default() -> Self {
        Factor::Named("id".into())
    }
}

impl Factor {
    fn mat(&self) -> Result<Mat2, LagError> {
        match self {
            Factor::Matrix(r) => Ok(Mat2::from_rows(*r)),
            Factor::Named(n) => match n.as_str() {
                "id" => Ok(Mat2::IDENTITY),
                "i" => Ok(I.mat()),
                "j" => Ok(J.mat()),
                "k" => Ok(K.mat()),
                other => Err(LagError::Spec(format!("unknown factor {other:?}"))),
            },
        }
    }
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

/// `coef · left · (u | u⁻¹ | Id) · right`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Term {
    #[serde(default = "one")]
    pub coef: f64,
    #[serde(default)]
    pub left: Factor,
    #[serde(default)]
    pub right: Factor,
    #[serde(default = "yes")]
    pub u: bool,
    #[serde(default)]
    pub inverse: bool,
}

/// JSON description of `u ↦ (p(u), q(u))`; each side is a sum of terms,
/// rescaled by `1/√det`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ImmersionSpec {
    pub name: String,
    #[serde(default)]
    pub step: Option<f64>,
    pub p: Vec<Term>,
    pub q: Vec<Term>,
}

/// An [`ImmersionSpec`] with its constant factors resolved.
#[derive(Clone, Debug)]
pub struct NumericImmersion {
    name: String,
    step: f64,
    p: Vec<(f64, Mat2, Option<bool>, Mat2)>,
    q: Vec<(f64, Mat2, Option<bool>, Mat2)>,
}

impl NumericImmersion {
    pub fn from_spec(spec: &ImmersionSpec) -> Result<Self, LagError> {
        let step = spec.step.unwrap_or(DIFF_STEP);
        if !(step.is_finite() && step > 0.0) {
            return Err(LagError::Spec(format!("step must be positive, got {step}")));
        }
        let terms = |ts: &[Term], side: &str| -> Result<Vec<_>, LagError> {
            if ts.is_empty() {
                return Err(LagError::Spec(format!("{side} has no terms")));
            }
            ts.iter()
                .map(|t| {
                    if !t.coef.is_finite() {
                        return Err(LagError::Spec("non-finite coefficient".into()));
                    }
                    Ok((t.coef, t.left.mat()?, t.u.then_some(t.inverse), t.right.mat()?))
                })
                .collect()
        };
        Ok(NumericImmersion { name: spec.name.clone(), step, p: terms(&spec.p, "p")?, q: terms(&spec.q, "q")? })
    }

    pub fn from_json_str(s: &str) -> Result<Self, LagError> {
        let spec: ImmersionSpec = serde_json::from_str(s).map_err(|e| LagError::Spec(e.to_string()))?;
        NumericImmersion::from_spec(&spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, LagError> {
        let text = std::fs::read_to_string(path).map_err(|e| LagError::Io(format!("{}: {e}", path.display())))?;
        NumericImmersion::from_json_str(&text)
    }
}

fn eval_side(terms: &[(f64, Mat2, Option<bool>, Mat2)], u: &Sl2Point) -> Result<Sl2Point, LagError> {
    let sum = terms.iter().fold(Mat2::ZERO, |acc, (c, l, mode, r)| {
        let mid = match mode {
            None => Mat2::IDENTITY,
            Some(false) => u.mat(),
            Some(true) => u.inverse().mat(),
        };
        acc + (*l * mid * *r).scale(*c)
    });
    Ok(Sl2Point::normalized(sum)?)
}

impl Immersion for NumericImmersion {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn point(&self, u: &Sl2Point) -> Result<ProductPoint, LagError> {
        Ok(ProductPoint::new(eval_side(&self.p, u)?, eval_side(&self.q, u)?))
    }

    fn step(&self) -> f64 {
        self.step
    }
}

/// `φ ∘ f` for an ambient isometry `φ`.
#[derive(Clone)]
pub struct Composed {
    pub iso: Isometry,
    pub inner: Arc<dyn Immersion>,
}

impl Composed {
    pub fn new(iso: Isometry, inner: Arc<dyn Immersion>) -> Self {
        Composed { iso, inner }
    }
}

impl Immersion for Composed {
    fn name(&self) -> String {
        format!("{}:{}", self.iso.name(), self.inner.name())
    }

    fn point(&self, u: &Sl2Point) -> Result<ProductPoint, LagError> {
        Ok(self.iso.apply(&self.inner.point(u)?))
    }

    fn differential(&self, u: &Sl2Point, v: &Sl2Elem) -> Result<TangentPair, LagError> {
        checked(self.iso.pushforward(&self.inner.differential(u, v)?))
    }
}

/// Named immersions plus `phi1:NAME` / `phi2:NAME` wrappers and JSON files.
#[derive(Clone)]
pub struct ImmersionRegistry {
    entries: BTreeMap<String, Arc<dyn Immersion>>,
}

impl Default for ImmersionRegistry {
    fn default() -> Self {
        ImmersionRegistry::with_builtins()
    }
}

impl ImmersionRegistry {
    pub fn empty() -> Self {
        ImmersionRegistry { entries: BTreeMap::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = ImmersionRegistry::empty();
        for e in Example::ALL {
            r.register(Arc::new(e));
        }
        r
    }

    pub fn register(&mut self, imm: Arc<dyn Immersion>) {
        self.entries.insert(imm.name(), imm);
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    /// Loads a JSON spec and registers it under its own name.
    pub fn load_file(&mut self, path: &Path) -> Result<Arc<dyn Immersion>, LagError> {
        let imm: Arc<dyn Immersion> = Arc::new(NumericImmersion::from_file(path)?);
        self.register(imm.clone());
        Ok(imm)
    }

    /// Looks up a name; `phi1:`/`phi2:` prefixes wrap the rest, and unknown
    /// names that are existing files are loaded as JSON specs.
    pub fn resolve(&self, name: &str) -> Result<Arc<dyn Immersion>, LagError> {
        if let Some(rest) = name.strip_prefix("phi1:") {
            return Ok(Arc::new(Composed::new(Isometry::Phi1, self.resolve(rest)?)));
        }
        if let Some(rest) = name.strip_prefix("phi2:") {
            return Ok(Arc::new(Composed::new(Isometry::Phi2, self.resolve(rest)?)));
        }
        if let Some(imm) = self.entries.get(name) {
            return Ok(imm.clone());
        }
        let path = Path::new(name);
        if path.is_file() {
            return Ok(Arc::new(NumericImmersion::from_file(path)?));
        }
        Err(LagError::Unknown(name.to_string()))
    }
}
