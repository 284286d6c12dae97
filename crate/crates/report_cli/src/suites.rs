use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use berger_metrics::{fit_berger, identification_table, match_frame_constants, BergerMetric, Stretch, SIGNS};
use connection::{
    curvature_convention_check, nabla_j_check, nabla_p_check, nk_connection, nk_connection_chart, ConnectionTable,
    LeftInvariantField,
};
use lagrangian::{
    adapted_frame, anglederi_residual, angles_at, change_frame, codazzi_residual_with, compati_residual, derivatives,
    example2_f_transition, frame_data, gauss_residual_with, isometry_angle_check, lagrangian_residual,
    lagrprop_residual, sectional_curvature, sffc_residual, Example, LagError,
};
use nalgebra::Vector3;
use nk_structure::chart::{constant_type_sides, g, j, p, tensor_g};
use nk_structure::{basis6, metric_g, random_pair, random_product_point, Isometry, PairVec, TangentPair};
use normal_forms::{classify, generate, refine, AngleMap, AngleTriple, NfError, NormalFormCase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2_core::{exp_sl2, random_elem, random_point, Sl2Point};

use crate::codazzi::{scan, ScanCase};
use crate::report::{CheckResult, ALGEBRAIC_TOL, CLASSIFIER_TOL, TWO_PATH_TOL};

/// Inputs shared by every suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// Replaces the default tolerance of every residual check.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(samples: usize, seed: u64, tol: Option<f64>) -> Self {
        SuiteConfig { samples: samples.max(1), seed, tol }
    }

    pub fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Independent stream per check so adding a check never shifts others.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn check(&self, name: &str, residual: f64, default_tol: f64, samples: usize) -> CheckResult {
        CheckResult::new(name, residual, self.tol(default_tol), samples, self.seed)
    }

    fn check_result<E>(&self, name: &str, r: Result<f64, E>, default_tol: f64, samples: usize) -> CheckResult {
        CheckResult::from_result(name, r, self.tol(default_tol), samples, self.seed)
    }

    /// Threshold checks (`value > bound`) keep their fixed bound.
    fn margin(&self, name: &str, residual: f64, samples: usize) -> CheckResult {
        CheckResult::new(name, residual, 0.0, samples, self.seed)
    }
}

pub trait VerificationSuite: Send + Sync {
    fn name(&self) -> &str;
    fn description(&self) -> &str;
    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult>;
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

/// The ambient structure: nearly Kähler identities, constant type,
/// curvature, `∇J`, `∇P`, isometries.
pub struct StructureSuite;

impl VerificationSuite for StructureSuite {
    fn name(&self) -> &str {
        "structure"
    }

    fn description(&self) -> &str {
        "identities of the nearly Kähler structure on SL(2,R)xSL(2,R)"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        let n = cfg.samples;
        let triples: Vec<[PairVec; 4]> = {
            let mut rng = cfg.rng(1);
            (0..n).map(|_| [0; 4].map(|_| random_pair(&mut rng))).collect()
        };
        let mut out = Vec::new();
        out.push(cfg.check(
            "structure.g_skew",
            max_over(triples.iter().map(|[x, y, z, _]| (g(&tensor_g(x, y), z) + g(&tensor_g(x, z), y)).abs())),
            ALGEBRAIC_TOL,
            n,
        ));
        out.push(cfg.check(
            "structure.g_anticommutes_with_j",
            max_over(triples.iter().map(|[x, y, _, _]| (tensor_g(x, &j(y)) + j(&tensor_g(x, y))).max_abs())),
            ALGEBRAIC_TOL,
            n,
        ));
        out.push(cfg.check(
            "structure.g_normal",
            max_over(triples.iter().map(|[x, y, z, _]| (g(&tensor_g(x, y), &j(z)) + g(&tensor_g(x, z), &j(y))).abs())),
            ALGEBRAIC_TOL,
            n,
        ));
        out.push(cfg.check(
            "structure.constant_type",
            max_over(triples.iter().map(|[x, y, z, w]| {
                let (l, r) = constant_type_sides(x, y, z, w);
                (l - r).abs()
            })),
            ALGEBRAIC_TOL,
            n,
        ));
        out.push(cfg.check("structure.constant_type_value", constant_type_value(cfg), ALGEBRAIC_TOL, n));
        out.push(cfg.check(
            "structure.j_compatible",
            max_over(triples.iter().map(|[x, y, _, _]| {
                (j(&j(x)) + *x).max_abs().max((g(&j(x), &j(y)) - g(x, y)).abs())
            })),
            ALGEBRAIC_TOL,
            n,
        ));
        out.push(cfg.check(
            "structure.p_properties",
            max_over(triples.iter().map(|[x, y, _, _]| {
                let involution = (p(&p(x)) - *x).max_abs();
                let isometric = (g(&p(x), &p(y)) - g(x, y)).abs();
                let anti = (p(&j(x)) + j(&p(x))).max_abs();
                involution.max(isometric).max(anti)
            })),
            ALGEBRAIC_TOL,
            n,
        ));
        let conv = curvature_convention_check(&basis6());
        out.push(cfg.check("structure.curvature_six_fields", conv.standard, 1e-8, conv.triples));

        let (mut wj, mut wp, mut two) = (0.0f64, 0.0f64, 0.0f64);
        let mut rng = cfg.rng(2);
        for _ in 0..n {
            let base = random_product_point(&mut rng);
            let (xv, yv) = (random_pair(&mut rng), random_pair(&mut rng));
            let x = TangentPair::new(base, xv);
            let y = LeftInvariantField::from_pair(yv);
            wj = wj.max(nabla_j_check(&x, &y));
            wp = wp.max(nabla_p_check(&x, &y));
            two = two.max((nk_connection(&x, &y).v - nk_connection_chart(&xv, &yv)).max_abs());
        }
        out.push(cfg.check("structure.nabla_j", wj, ALGEBRAIC_TOL, n));
        out.push(cfg.check("structure.nabla_p", wp, ALGEBRAIC_TOL, n));
        out.push(cfg.check("structure.connection_two_path", two, TWO_PATH_TOL, n));

        let mut rng = cfg.rng(3);
        let iso = max_over((0..n.min(50)).map(|_| {
            let base = random_product_point(&mut rng);
            let x = TangentPair::new(base, random_pair(&mut rng));
            let y = TangentPair::new(base, random_pair(&mut rng));
            let before = metric_g(&x, &y).unwrap_or(f64::NAN);
            max_over([Isometry::Phi1, Isometry::Phi2].iter().map(|phi| {
                let after = metric_g(&phi.pushforward(&x), &phi.pushforward(&y)).unwrap_or(f64::NAN);
                (after - before).abs() / (1.0 + before.abs())
            }))
        }));
        out.push(cfg.check("structure.isometries_preserve_metric", iso, TWO_PATH_TOL, n.min(50)));

        let mut rng = cfg.rng(4);
        let unimodular = max_over((0..n).map(|_| (exp_sl2(&random_elem(&mut rng)).mat().det() - 1.0).abs()));
        out.push(cfg.check("structure.exp_unimodular", unimodular, ALGEBRAIC_TOL, n));
        out
    }
}

/// `g(G(X,Y),G(X,Y)) = −2/3` for unit spacelike `X, Y` with `Y ⊥ X, JX`.
fn constant_type_value(cfg: &SuiteConfig) -> f64 {
    let mut rng = cfg.rng(5);
    let mut worst = 0.0f64;
    let mut found = 0;
    while found < cfg.samples {
        let x = random_pair(&mut rng);
        let nx = g(&x, &x);
        if nx < 0.1 {
            continue;
        }
        let x = x.scale(1.0 / nx.sqrt());
        let y = random_pair(&mut rng);
        let jx = j(&x);
        let y = y - x.scale(g(&y, &x)) - jx.scale(g(&y, &jx));
        let ny = g(&y, &y);
        if ny < 0.1 {
            continue;
        }
        let y = y.scale(1.0 / ny.sqrt());
        let gg = tensor_g(&x, &y);
        worst = worst.max((g(&gg, &gg) + 2.0 / 3.0).abs());
        found += 1;
    }
    worst
}

/// The three totally geodesic examples and the isometry angle laws.
pub struct ExamplesSuite;

fn example_points(cfg: &SuiteConfig, salt: u64, n: usize) -> Vec<Sl2Point> {
    let mut rng = cfg.rng(salt);
    (0..n).map(|_| random_point(&mut rng)).collect()
}

impl VerificationSuite for ExamplesSuite {
    fn name(&self) -> &str {
        "examples"
    }

    fn description(&self) -> &str {
        "the totally geodesic Lagrangian examples"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        let n = cfg.samples.min(20);
        let points = example_points(cfg, 10, n);
        let mut out = Vec::new();
        for ex in Example::ALL {
            out.extend(example_checks(cfg, ex, &points));
        }
        out.push(example1_curvature(cfg));
        for map in [AngleMap::Phi1, AngleMap::Phi2] {
            let r: Result<f64, LagError> = Example::ALL.iter().try_fold(0.0f64, |m, ex| {
                points.iter().take(5).try_fold(m, |m, u| {
                    Ok(m.max(isometry_angle_check(Arc::new(*ex), map, u)?.residual))
                })
            });
            out.push(cfg.check_result(&format!("isometry.{}_angle_law", map.name()), r, TWO_PATH_TOL, 15.min(3 * n)));
        }
        out
    }
}

fn example_checks(cfg: &SuiteConfig, ex: Example, points: &[Sl2Point]) -> Vec<CheckResult> {
    let name = ex.label();
    let n = points.len();
    let want = AngleTriple::new(ex.expected_angles());
    let mut acc = [0.0f64; 11];
    let mut failed = false;
    for u in points {
        let step = || -> Result<[f64; 11], LagError> {
            let (frame, _) = adapted_frame(&ex, u)?;
            let data = frame_data(&ex, &frame)?;
            let dv = derivatives(&ex, &data)?;
            Ok([
                lagrangian_residual(&ex, u)?,
                data.h.max_abs(),
                angles_at(&ex, u)?.distance(&want),
                gauss_residual_with(&data, &dv),
                codazzi_residual_with(&data, &dv),
                frame.gram_residual().max(frame.jg_table_residual()),
                lagrprop_residual(&data),
                sffc_residual(&data)?,
                anglederi_residual(&ex, &data)?,
                compati_residual(&data, &dv)?,
                frame.linear_dependence_residual(),
            ])
        };
        match step() {
            Ok(v) => {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = a.max(x);
                }
            }
            Err(_) => failed = true,
        }
    }
    if failed {
        acc = [f64::NAN; 11];
    }
    let spec = [
        ("lagrangian", ALGEBRAIC_TOL),
        ("second_fundamental_form", 1e-8),
        ("angles", 1e-8),
        ("gauss", TWO_PATH_TOL),
        ("codazzi", TWO_PATH_TOL),
        ("frame", 1e-8),
        ("lagrangian_properties", 1e-8),
        ("sffc", TWO_PATH_TOL),
        ("angle_derivatives", CLASSIFIER_TOL),
        ("compatibility", CLASSIFIER_TOL),
        ("linear_dependence", ALGEBRAIC_TOL),
    ];
    spec.iter().zip(acc).map(|((label, tol), r)| cfg.check(&format!("{name}.{label}"), r, *tol, n)).collect()
}

fn example1_curvature(cfg: &SuiteConfig) -> CheckResult {
    let mut rng = cfg.rng(11);
    let u = random_point(&mut rng);
    let r = (|| -> Result<f64, LagError> {
        let (frame, _) = adapted_frame(&Example::One, &u)?;
        let data = frame_data(&Example::One, &frame)?;
        let mut worst = 0.0f64;
        let mut planes = 0;
        while planes < 20 {
            let x = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let y = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let d = frame.delta.matrix();
            let q = x.dot(&(d * x)) * y.dot(&(d * y)) - x.dot(&(d * y)).powi(2);
            if q.abs() < 1e-2 {
                continue;
            }
            worst = worst.max((sectional_curvature(&data, &x, &y)? + 1.5).abs());
            planes += 1;
        }
        Ok(worst)
    })();
    cfg.check_result("example1.sectional_curvature", r, 1e-8, 20)
}

/// Classifier round trips, refinement and the Codazzi obstructions.
pub struct NormalFormsSuite;

fn sample_case<R: Rng>(rng: &mut R, case: u8) -> NormalFormCase {
    let away = |rng: &mut R, min_sin: f64| loop {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        if a.sin().abs() >= min_sin {
            break a;
        }
    };
    let separated = |rng: &mut R, others: &[f64]| loop {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        if others.iter().all(|o| (a.cos() - o.cos()).abs() >= 0.05) {
            break a;
        }
    };
    match case {
        1 => {
            let a1 = separated(rng, &[]);
            let a2 = separated(rng, &[a1]);
            let a3 = separated(rng, &[a1, a2]);
            NormalFormCase::Case1 { angles: [a1, a2, a3] }
        }
        2 => {
            let a1 = away(rng, 0.2);
            if rng.gen_bool(0.5) {
                NormalFormCase::Case2 { angle1: a1, angle2: separated(rng, &[a1]), c: 0.0 }
            } else {
                NormalFormCase::Case2 { angle1: a1, angle2: -a1, c: rng.gen_range(-1.5..1.5) }
            }
        }
        3 => NormalFormCase::Case3 { t: rng.gen_range(-2.0..2.0) },
        4 => NormalFormCase::Case4 { angle: away(rng, 0.3) },
        _ => {
            let a1 = away(rng, 0.2);
            let x = rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let a2 = rng.gen_range(0.0..2.0 * PI);
            NormalFormCase::case5_from_x(a1, a2, x).expect("sin 2θ₁ is bounded away from 0")
        }
    }
}

fn round_trip(case: &NormalFormCase, seed: u64) -> f64 {
    let Ok(pair) = generate(case, seed) else { return f64::NAN };
    match classify(&pair) {
        Ok(c) => case.param_distance(&c.case).map_or(f64::INFINITY, |d| d.max(c.form_residual)),
        Err(_) => f64::INFINITY,
    }
}

impl VerificationSuite for NormalFormsSuite {
    fn name(&self) -> &str {
        "normal_forms"
    }

    fn description(&self) -> &str {
        "operator-pair classifier and Codazzi obstructions"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        let n = cfg.samples.min(100);
        let mut out = Vec::new();
        for case in 1..=5u8 {
            let mut rng = cfg.rng(20 + case as u64);
            let worst = max_over((0..n).map(|s| round_trip(&sample_case(&mut rng, case), cfg.seed.wrapping_add(s as u64))));
            out.push(cfg.check(&format!("classifier.case{case}_round_trip"), worst, CLASSIFIER_TOL, n));
        }
        let mut rng = cfg.rng(26);
        let accepted = (0..n)
            .filter(|s| {
                let case = sample_case(&mut rng, 3);
                let raw = generate(&case, cfg.seed.wrapping_add(*s as u64)).and_then(|p| classify(&p));
                !matches!(raw.and_then(|c| refine(&c.case, 1)), Err(NfError::Rejected { .. }))
            })
            .count();
        out.push(cfg.margin("classifier.case3_rejected", accepted as f64, n));

        let c2 = scan(ScanCase::Two, 50);
        out.push(cfg.margin("codazzi.case2_min_above_0.4", 0.4 - c2.min_norm.unwrap_or(f64::NAN), c2.points.len()));
        let c3 = scan(ScanCase::Three, 50);
        let want = 8.0 / (9.0 * 3f64.sqrt());
        let dev = max_over(c3.points.iter().map(|p| (p.norm - want).abs()));
        out.push(CheckResult::new("codazzi.case3_constant", dev, cfg.tol(1e-10), c3.points.len(), cfg.seed));
        let c4 = scan(ScanCase::Four, 20);
        out.push(cfg.margin("codazzi.case4_nonzero", -c4.min_norm.unwrap_or(f64::NAN) + f64::EPSILON, c4.points.len()));
        out
    }
}

/// Berger-like metrics and the frame tables of examples 2 and 3.
pub struct BergerSuite;

fn example_omega(ex: Example, u: &Sl2Point) -> Result<ConnectionTable, LagError> {
    let (frame, _) = adapted_frame(&ex, u)?;
    Ok(frame_data(&ex, &frame)?.omega)
}

/// The product-metric table of `F₁ = −√(3/2)(i,i)`, `F₂ = (j,−j)/√2`, `F₃ = (k,−k)/√2`.
pub fn product_frame_reference() -> ConnectionTable {
    let a = 1.5f64.sqrt();
    let b = 1.0 / 6f64.sqrt();
    let mut t = ConnectionTable::zeros(["F1", "F2", "F3"]);
    for (i, jj, k, v) in [(0, 1, 2, -a), (0, 2, 1, a), (1, 0, 2, a), (1, 2, 0, b), (2, 0, 1, -a), (2, 1, 0, -b)] {
        t.set(i, jj, k, v);
    }
    t
}

impl VerificationSuite for BergerSuite {
    fn name(&self) -> &str {
        "berger"
    }

    fn description(&self) -> &str {
        "Berger-like metrics and the connection tables of examples 2 and 3"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        let mut out = Vec::new();
        let u = example_points(cfg, 30, 1)[0];
        let s6 = 6f64.sqrt();
        let ex2 = (|| -> Result<f64, String> {
            let omega = example_omega(Example::Two, &u).map_err(|e| e.to_string())?;
            let f = change_frame(&omega, &example2_f_transition(0.0), ["F1", "F2", "F3"]).map_err(|e| e.to_string())?;
            let m = BergerMetric::new(2.0, -1.0 / s6, Stretch::Timelike).map_err(|e| e.to_string())?;
            Ok(match_frame_constants(&f, &m.connection_table()).deviation)
        })();
        out.push(cfg.check_result("berger.example2_timelike", ex2, 1e-8, 1));
        let ex3 = (|| -> Result<f64, String> {
            let omega = example_omega(Example::Three, &u).map_err(|e| e.to_string())?;
            let fit = fit_berger(&omega, Stretch::Spacelike).map_err(|e| e.to_string())?;
            let params = (fit.metric.kappa - 2.0).abs().max((fit.metric.tau - 1.0 / s6).abs());
            Ok(fit.residual.max(params))
        })();
        out.push(cfg.check_result("berger.example3_spacelike_fit", ex3, TWO_PATH_TOL, 1));
        out.push(cfg.check(
            "berger.identification",
            identification_table().max_diff(&product_frame_reference()),
            1e-8,
            1,
        ));

        let n = cfg.samples;
        let mut rng = cfg.rng(31);
        let (mut koszul, mut torsion, mut compat, mut frame) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut failed = false;
        for s in 0..n {
            let kappa = rng.gen_range(0.1..5.0);
            let tau = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let stretch = if s % 2 == 0 { Stretch::Timelike } else { Stretch::Spacelike };
            let Ok(m) = BergerMetric::new(kappa, tau, stretch) else {
                failed = true;
                continue;
            };
            let t = m.connection_table();
            match (m.koszul_table(), m.torsion_residual(&t), m.frame_residual()) {
                (Ok(k), Ok(tr), Ok(fr)) => {
                    koszul = koszul.max(t.max_diff(&k));
                    torsion = torsion.max(tr);
                    frame = frame.max(fr);
                }
                _ => failed = true,
            }
            compat = compat.max(t.compatibility_residual(SIGNS));
        }
        let poison = |x: f64| if failed { f64::NAN } else { x };
        out.push(cfg.check("berger.koszul", poison(koszul), TWO_PATH_TOL, n));
        out.push(cfg.check("berger.torsion_free", poison(torsion), ALGEBRAIC_TOL, n));
        out.push(cfg.check("berger.metric_compatible", poison(compat), ALGEBRAIC_TOL, n));
        out.push(cfg.check("berger.frame_orthonormal", poison(frame), ALGEBRAIC_TOL, n));
        out
    }
}

/// Runs its members in order and concatenates their checks.
pub struct CompositeSuite {
    name: String,
    members: Vec<Arc<dyn VerificationSuite>>,
}

impl CompositeSuite {
    pub fn new(name: &str, members: Vec<Arc<dyn VerificationSuite>>) -> Self {
        CompositeSuite { name: name.into(), members }
    }
}

impl VerificationSuite for CompositeSuite {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        "every suite"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        self.members.iter().flat_map(|s| s.run(cfg)).collect()
    }
}

pub struct SuiteRegistry {
    suites: BTreeMap<String, Arc<dyn VerificationSuite>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        SuiteRegistry { suites: BTreeMap::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = SuiteRegistry::empty();
        let members: Vec<Arc<dyn VerificationSuite>> =
            vec![Arc::new(StructureSuite), Arc::new(ExamplesSuite), Arc::new(NormalFormsSuite), Arc::new(BergerSuite)];
        for s in &members {
            r.register(s.clone());
        }
        r.register(Arc::new(CompositeSuite::new("all", members)));
        r
    }

    pub fn register(&mut self, suite: Arc<dyn VerificationSuite>) {
        self.suites.insert(suite.name().to_string(), suite);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn VerificationSuite>> {
        self.suites.get(name).cloned()
    }

    pub fn names(&self) -> Vec<String> {
        self.suites.keys().cloned().collect()
    }
}
