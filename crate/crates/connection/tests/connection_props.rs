use connection::*;
use nk_structure::chart::{curvature, g, j, p, tensor_g};
use nk_structure::{basis6, random_pair, random_product_point, PairVec, TangentPair};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2_core::{Sl2Elem, I, J, K};

fn elem() -> impl Strategy<Value = Sl2Elem> {
    (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(a, b, c)| Sl2Elem::from_entries(a, b, c))
}

fn pair() -> impl Strategy<Value = PairVec> {
    (elem(), elem()).prop_map(|(a, b)| PairVec::new(a, b))
}

fn field(v: PairVec) -> LeftInvariantField {
    LeftInvariantField::from_pair(v)
}

#[test]
fn seeded_nabla_j_and_nabla_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut wj, mut wp) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let base = random_product_point(&mut rng);
        let x = TangentPair::new(base, random_pair(&mut rng));
        let y = field(random_pair(&mut rng));
        wj = wj.max(nabla_j_check(&x, &y));
        wp = wp.max(nabla_p_check(&x, &y));
    }
    assert!(wj <= 1e-9, "nabla J {wj:e}");
    assert!(wp <= 1e-9, "nabla P {wp:e}");
}

#[test]
fn nabla_j_is_tensorial_in_y() {
    // f·Y with f(base) = 1 and X(f) = s: ∇(fY) = sY + ∇Y
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let base = random_product_point(&mut rng);
        let x = TangentPair::new(base, random_pair(&mut rng));
        let y = field(random_pair(&mut rng));
        let s = 0.75;
        let jy = field(j(&y.pair()));
        let scaled = (nk_connection(&x, &jy).v + jy.pair().scale(s))
            - j(&(nk_connection(&x, &y).v + y.pair().scale(s)))
            - tensor_g(&x.v, &y.pair());
        assert!((scaled.max_abs() - nabla_j_check(&x, &y)).abs() <= 1e-9);
    }
}

#[test]
fn embedded_and_chart_connections_agree_at_many_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_pair(&mut rng);
    let y = random_pair(&mut rng);
    let chart = nk_connection_chart(&x, &y);
    for _ in 0..20 {
        let base = random_product_point(&mut rng);
        let emb = nk_connection(&TangentPair::new(base, x), &field(y));
        assert!((emb.v - chart).max_abs() <= 1e-10);
    }
}

#[test]
fn example_one_fields_are_geodesic() {
    let s = (1.5f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let base = random_product_point(&mut rng);
    for e in [I, J, K] {
        let v = PairVec::new(Sl2Elem::ZERO, e.scale(s));
        assert!(nk_connection(&TangentPair::new(base, v), &field(v)).v.max_abs() < 1e-10);
    }
}

#[test]
fn nabla_p_on_p_invariant_frame_vector() {
    let e1 = PairVec::new(I, I).scale((1.5f64).sqrt());
    assert_eq!(p(&e1), e1);
    let x = TangentPair::new(nk_structure::ProductPoint::IDENTITY, e1);
    let (l, r) = nabla_p_sides(&x, &field(e1));
    assert!((l - r).max_abs() <= 1e-9);
}

#[test]
fn curvature_cross_check_six_fields() {
    let c = curvature_convention_check(&basis6());
    assert_eq!(c.triples, 216);
    assert!(c.standard <= 1e-8);
}

#[test]
fn curvature_cross_check_twenty_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let fields: Vec<PairVec> = (0..20).map(|_| random_pair(&mut rng)).collect();
    let c = curvature_convention_check(&fields);
    assert_eq!(c.triples, 8000);
    assert!(c.standard <= 1e-8, "{c:?}");
}

#[test]
fn curvature_on_fifty_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let base = random_product_point(&mut rng);
        let (x, y, z) = (random_pair(&mut rng), random_pair(&mut rng), random_pair(&mut rng));
        let r = connection_curvature(&field(x), &field(y), &field(z), base);
        assert!((r.v - curvature(&x, &y, &z)).max_abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torsion_free(x in pair(), y in pair()) {
        let br = lie_bracket(&field(x), &field(y)).pair();
        let t = nk_connection_chart(&x, &y) - nk_connection_chart(&y, &x) - br;
        prop_assert!(t.max_abs() <= 1e-9);
        let te = product_connection_chart(&x, &y) - product_connection_chart(&y, &x) - br;
        prop_assert!(te.max_abs() <= 1e-9);
    }

    #[test]
    fn metric_compatible(x in pair(), y in pair(), z in pair()) {
        let s = g(&nk_connection_chart(&x, &y), &z) + g(&y, &nk_connection_chart(&x, &z));
        prop_assert!(s.abs() <= 1e-9);
    }

    #[test]
    fn nabla_j_skew(x in pair(), y in pair(), z in pair()) {
        // G extracted from the connection path, not the closed form
        let gj = |y: &PairVec| nk_connection_chart(&x, &j(y)) - j(&nk_connection_chart(&x, y));
        let s = g(&gj(&y), &z) + g(&gj(&z), &y);
        prop_assert!(s.abs() <= 1e-9);
    }

    #[test]
    fn curvature_antisymmetric(x in pair(), y in pair(), z in pair()) {
        prop_assert!((curvature_chart(&x, &y, &z) + curvature_chart(&y, &x, &z)).max_abs() <= 1e-10);
    }

    #[test]
    fn first_bianchi(x in pair(), y in pair(), z in pair()) {
        let s = curvature_chart(&x, &y, &z) + curvature_chart(&y, &z, &x) + curvature_chart(&z, &x, &y);
        prop_assert!(s.max_abs() <= 1e-8);
    }
}
