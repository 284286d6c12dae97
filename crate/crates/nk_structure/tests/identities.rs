use nalgebra::{SMatrix, SymmetricEigen};
use nk_structure::chart::{constant_type_residual, constant_type_sides, g, j, p, product_metric, q, tensor_g};
use nk_structure::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2_core::{inner, random_point, Mat2, Sl2Elem};

fn elem() -> impl Strategy<Value = Sl2Elem> {
    (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(a, b, c)| Sl2Elem::from_entries(a, b, c))
}

fn pair() -> impl Strategy<Value = PairVec> {
    (elem(), elem()).prop_map(|(a, b)| PairVec::new(a, b))
}

fn samples(seed: u64, n: usize) -> Vec<[PairVec; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| [random_pair(&mut rng), random_pair(&mut rng), random_pair(&mut rng)])
        .collect()
}

/// Ambient evaluation of the metric display, using the actual matrices aα etc.
fn ambient_metric(x: &TangentPair, y: &TangentPair) -> f64 {
    let (ax, ay) = (x.ambient(), y.ambient());
    let swapped = AmbientVector::new(x.base.a.translate(&x.v.beta), x.base.b.translate(&x.v.alpha));
    let prod = |u: &AmbientVector, w: &AmbientVector| inner(&u.x, &w.x) + inner(&u.y, &w.y);
    (2.0 / 3.0) * prod(&ax, &ay) - (1.0 / 3.0) * prod(&swapped, &ay)
}

#[test]
fn nearly_kahler_identities_on_seeded_triples() {
    let mut worst = 0.0f64;
    for [x, y, z] in samples(42, 200) {
        let skew = g(&tensor_g(&x, &y), &z) + g(&tensor_g(&x, &z), &y);
        let anti = tensor_g(&x, &j(&y)) + j(&tensor_g(&x, &y));
        let normal = g(&tensor_g(&x, &y), &j(&z)) + g(&tensor_g(&x, &z), &j(&y));
        worst = worst.max(skew.abs()).max(anti.max_abs()).max(normal.abs());
    }
    assert!(worst <= 1e-9, "worst residual {worst:e}");
}

#[test]
fn constant_type_on_seeded_pairs() {
    let worst = samples(7, 200)
        .iter()
        .map(|[x, y, _]| constant_type_residual(x, y))
        .fold(0.0, f64::max);
    assert!(worst <= 1e-9);
    let x = PairVec::new(Sl2Elem::from_coords(0.1, 0.4, -0.3), Sl2Elem::ZERO);
    let (l, r) = constant_type_sides(&x, &x, &x, &x);
    assert!(l.abs() < 1e-15 && r.abs() < 1e-15);
}

#[test]
fn metric_signature_is_two_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let base = random_product_point(&mut rng);
        let b = basis6();
        let gram = SMatrix::<f64, 6, 6>::from_fn(|r, c| {
            metric_g(&TangentPair::new(base, b[r]), &TangentPair::new(base, b[c])).unwrap()
        });
        let eig = SymmetricEigen::new(gram).eigenvalues;
        let neg = eig.iter().filter(|v| **v < -1e-9).count();
        let pos = eig.iter().filter(|v| **v > 1e-9).count();
        assert_eq!((neg, pos), (2, 4));
    }
}

#[test]
fn chart_metric_matches_ambient_display() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let base = random_product_point(&mut rng);
        let x = TangentPair::new(base, random_pair(&mut rng));
        let y = TangentPair::new(base, random_pair(&mut rng));
        assert!((metric_g(&x, &y).unwrap() - ambient_metric(&x, &y)).abs() < 1e-9);
    }
}

#[test]
fn tangent_vectors_are_orthogonal_to_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let base = random_product_point(&mut rng);
        let amb = TangentPair::new(base, random_pair(&mut rng)).ambient();
        assert!(inner(&amb.x, &base.a.mat()).abs() < 1e-10);
        assert!(inner(&amb.y, &base.b.mat()).abs() < 1e-10);
    }
}

/// Closed-form pushforwards as an oracle for the finite-difference routine.
fn closed_form_push(iso: &Isometry, x: &TangentPair) -> PairVec {
    let (a, b) = (x.v.alpha, x.v.beta);
    match iso {
        Isometry::Phi1 => PairVec::new(b, a),
        Isometry::Phi2 => {
            let pt = x.base.a;
            PairVec::new(pt.adjoint(&-a), pt.adjoint(&(b - a)))
        }
        Isometry::PhiAbc { c, .. } => {
            let ci = c.inverse();
            PairVec::new(ci.adjoint(&a), ci.adjoint(&b))
        }
    }
}

#[test]
fn isometries_preserve_metric_and_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let abc = Isometry::PhiAbc {
        a: random_point(&mut rng),
        b: random_point(&mut rng),
        c: random_point(&mut rng),
    };
    for iso in [Isometry::Phi1, Isometry::Phi2, abc] {
        for _ in 0..30 {
            let base = random_product_point(&mut rng);
            let x = TangentPair::new(base, random_pair(&mut rng));
            let y = TangentPair::new(base, random_pair(&mut rng));
            let (px, py) = (iso.pushforward(&x), iso.pushforward(&y));
            let dg = metric_g(&px, &py).unwrap() - metric_g(&x, &y).unwrap();
            assert!(dg.abs() < 1e-8, "{} metric drift {dg:e}", iso.name());
            assert!((px.v - closed_form_push(&iso, &x)).max_abs() < 1e-8);
        }
    }
}

#[test]
fn phi1_and_phi2_are_anti_holomorphic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for iso in [Isometry::Phi1, Isometry::Phi2] {
        let base = random_product_point(&mut rng);
        let x = TangentPair::new(base, random_pair(&mut rng));
        let lhs = iso.pushforward(&cx_j(&x)).v;
        let rhs = cx_j(&iso.pushforward(&x)).v;
        assert!((lhs + rhs).max_abs() < 1e-8);
    }
}

#[test]
fn phi_abc_from_matrices() {
    let m = Mat2::new(2.0, 1.0, 1.0, 1.0);
    let iso = Isometry::phi_abc(m, Mat2::IDENTITY, m).unwrap();
    let out = iso.apply(&ProductPoint::IDENTITY);
    assert!((out.a.mat() - m * m).max_abs() < 1e-14);
    assert!((out.b.mat() - m).max_abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn j_is_a_compatible_complex_structure(x in pair(), y in pair()) {
        prop_assert!((j(&j(&x)) + x).max_abs() <= 1e-12);
        prop_assert!((g(&j(&x), &j(&y)) - g(&x, &y)).abs() <= 1e-12);
        prop_assert!((g(&j(&x), &y) + g(&x, &j(&y))).abs() <= 1e-12);
        prop_assert!((g(&x, &y) - g(&y, &x)).abs() <= 1e-12);
    }

    #[test]
    fn almost_product_properties(x in pair(), y in pair()) {
        prop_assert!((p(&p(&x)) - x).max_abs() <= 1e-12);
        prop_assert!((g(&p(&x), &p(&y)) - g(&x, &y)).abs() <= 1e-10);
        prop_assert!((p(&j(&x)) + j(&p(&x))).max_abs() <= 1e-10);
        prop_assert!((g(&p(&x), &y) - g(&x, &p(&y))).abs() <= 1e-10);
        prop_assert!((p(&tensor_g(&x, &y)) + tensor_g(&p(&x), &p(&y))).max_abs() <= 1e-10);
    }

    #[test]
    fn product_structure_q(x in pair(), y in pair()) {
        prop_assert!((q(&q(&x)) - x).max_abs() <= 1e-10);
        prop_assert!((product_metric(&q(&x), &q(&y)) - product_metric(&x, &y)).abs() <= 1e-10);
        let rel = 2.0 * g(&x, &y) + g(&x, &p(&y));
        prop_assert!((rel - product_metric(&x, &y)).abs() <= 1e-12);
    }

    #[test]
    fn g_is_antisymmetric(x in pair(), y in pair()) {
        prop_assert!((tensor_g(&x, &y) + tensor_g(&y, &x)).max_abs() <= 1e-12);
        prop_assert!(tensor_g(&x, &x).max_abs() <= 1e-12);
    }

    #[test]
    fn constant_type_full_four_argument(x in pair(), y in pair(), z in pair(), w in pair()) {
        let (l, r) = constant_type_sides(&x, &y, &z, &w);
        prop_assert!((l - r).abs() <= 1e-9);
    }

    #[test]
    fn curvature_antisymmetry(x in pair(), y in pair(), z in pair(), w in pair()) {
        let a = g(&chart::curvature(&x, &y, &z), &w);
        let b = g(&chart::curvature(&y, &x, &z), &w);
        prop_assert!((a + b).abs() <= 1e-10);
    }
}
