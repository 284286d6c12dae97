use std::f64::consts::PI;

use nalgebra::Matrix3;
use normal_forms::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

fn check(case: NormalFormCase, seed: u64) {
    let pair = generate(&case, seed).unwrap();
    let r = pair.residuals();
    assert!(r.symmetry <= 1e-10 && r.commutator <= 1e-10 && r.unit <= 1e-10, "{case:?} {r:?}");
    let out = classify(&pair).unwrap_or_else(|e| panic!("{case:?} seed {seed}: {e}"));
    let d = case
        .param_distance(&out.case)
        .unwrap_or_else(|| panic!("{case:?} classified as {:?}", out.case));
    assert!(d <= TOL, "{case:?} → {:?} (distance {d:e})", out.case);
    assert!(out.gram_residual <= 1e-7, "{case:?} gram {:e}", out.gram_residual);
    assert!(out.form_residual <= TOL, "{case:?} form {:e}", out.form_residual);
}

fn angle_away_from_axis<R: Rng>(rng: &mut R, min_sin: f64) -> f64 {
    loop {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        if a.sin().abs() >= min_sin {
            return a;
        }
    }
}

fn separated_cos<R: Rng>(rng: &mut R, others: &[f64]) -> f64 {
    loop {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        if others.iter().all(|o| (a.cos() - o.cos()).abs() >= 0.05) {
            return a;
        }
    }
}

#[test]
fn case1_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for seed in 0..100 {
        let a1 = separated_cos(&mut rng, &[]);
        let a2 = separated_cos(&mut rng, &[a1]);
        let a3 = separated_cos(&mut rng, &[a1, a2]);
        check(NormalFormCase::Case1 { angles: [a1, a2, a3] }, seed);
    }
}

#[test]
fn case1_degenerate_spectra() {
    let t = 4.0 * PI / 3.0;
    let list = [
        [0.0; 3],
        [t; 3],
        [0.0, PI, PI],
        [PI, PI, 0.0],
        [0.7, 0.7, 2.0],
        [0.7, 2.0, 2.0],
        [0.7, -0.7, 2.0],
        [0.7, 2.0, -0.7],
        [2.0, 0.7, -0.7],
        [0.7, -0.7, 0.7],
    ];
    for (seed, angles) in list.into_iter().enumerate() {
        check(NormalFormCase::Case1 { angles }, seed as u64);
    }
}

#[test]
fn example_one_operators() {
    let r3 = 3f64.sqrt();
    let pair = OperatorPair::new(Matrix3::identity() * -0.5, Matrix3::identity() * (-r3 / 2.0), Delta::D1);
    let out = classify(&pair).unwrap();
    match out.case {
        NormalFormCase::Case1 { angles } => {
            for a in angles {
                assert!(angle_dist(a, 4.0 * PI / 3.0) < 1e-12);
            }
        }
        c => panic!("{c:?}"),
    }
    let id = classify(&OperatorPair::new(Matrix3::identity(), Matrix3::zeros(), Delta::D1)).unwrap();
    assert_eq!(id.case.canonical(), NormalFormCase::Case1 { angles: [0.0; 3] });
}

#[test]
fn case2_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for seed in 0..100 {
        let a1 = angle_away_from_axis(&mut rng, 0.2);
        let case = if seed % 2 == 0 {
            NormalFormCase::Case2 { angle1: a1, angle2: separated_cos(&mut rng, &[a1]), c: 0.0 }
        } else {
            NormalFormCase::Case2 { angle1: a1, angle2: -a1, c: rng.gen_range(-1.5..1.5) }
        };
        check(case, seed);
    }
}

#[test]
fn case3_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for seed in 0..100 {
        check(NormalFormCase::Case3 { t: rng.gen_range(-2.0..2.0) }, seed);
    }
}

#[test]
fn case4_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for seed in 0..100 {
        check(NormalFormCase::Case4 { angle: angle_away_from_axis(&mut rng, 0.3) }, seed);
    }
}

#[test]
fn case5_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for seed in 0..100 {
        let a1 = angle_away_from_axis(&mut rng, 0.2);
        let x = rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let case = NormalFormCase::case5_from_x(a1, rng.gen_range(0.0..2.0 * PI), x).unwrap();
        check(case, seed);
    }
    check(NormalFormCase::case5_from_x(PI / 3.0, 1.0, 0.7).unwrap(), 7);
}

#[test]
fn refined_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for seed in 0..100u64 {
        let case = match seed % 4 {
            0 => {
                let a1 = separated_cos(&mut rng, &[]);
                let a2 = separated_cos(&mut rng, &[a1]);
                NormalFormCase::Refined1 { angles: [a1, a2, -a1 - a2] }
            }
            1 => {
                let a1 = angle_away_from_axis(&mut rng, 0.2);
                NormalFormCase::Refined2 { angle1: a1, angle2: -2.0 * a1 }
            }
            2 => NormalFormCase::Refined3 { sign: if rng.gen_bool(0.5) { 1.0 } else { -1.0 } },
            _ => {
                let a2: f64 = rng.gen_range(0.3..2.0 * PI - 0.3);
                NormalFormCase::Refined4 { angle1: -a2 / 2.0, angle2: a2, lambda: rng.gen_range(0.2..1.2) }
            }
        };
        let pair = generate(&case, seed).unwrap();
        let raw = classify(&pair).unwrap_or_else(|e| panic!("{case:?}: {e}"));
        let refined = match refine(&raw.case, 1) {
            Ok(r) => r,
            Err(e) => panic!("{case:?} via {:?}: {e}", raw.case),
        };
        let d = case.param_distance(&refined).unwrap_or_else(|| panic!("{case:?} → {refined:?}"));
        assert!(d <= TOL, "{case:?} → {refined:?}");
    }
}

#[test]
fn case3_is_rejected_by_refinement() {
    let out = classify(&generate(&NormalFormCase::Case3 { t: 1.0 }, 9).unwrap()).unwrap();
    assert!(matches!(refine(&out.case, 1), Err(NfError::Rejected { .. })));
}

#[test]
fn unsupported_pairs_are_reported() {
    // A = −Id with a nilpotent B on the null plane
    let b = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let pair = OperatorPair::new(-Matrix3::identity(), b, Delta::D2);
    assert!(pair.validate().is_ok());
    assert!(matches!(classify(&pair), Err(NfError::Unsupported(_))));
    // Jordan block with the opposite sign
    let a = Matrix3::new(-1.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
    let pair = OperatorPair::new(a, Matrix3::zeros(), Delta::D2);
    assert!(pair.validate().is_err() || classify(&pair).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filter_is_idempotent(k in proptest::array::uniform3(0u8..6), perm in any::<bool>()) {
        let mut a = k.map(|v| v as f64 * PI / 3.0);
        if perm { a.swap(1, 2); }
        if let Ok(out) = totally_geodesic_angle_filter(&AngleTriple::new(a)) {
            let again = totally_geodesic_angle_filter(&out.canonical).unwrap();
            prop_assert_eq!(again.canonical, out.canonical);
            prop_assert!(again.steps.is_empty());
        }
    }

    #[test]
    fn phi1_is_an_involution(a in proptest::array::uniform3(0.0f64..6.28)) {
        let t = AngleTriple::new(a);
        let back = isometry_angle_map(&isometry_angle_map(&t, AngleMap::Phi1), AngleMap::Phi1);
        prop_assert!(back.distance(&t) <= 1e-12);
    }

    #[test]
    fn classifier_frames_are_delta_orthonormal(seed in 0u64..10_000, a in 0.4f64..2.7, x in 0.3f64..1.2) {
        let case = NormalFormCase::case5_from_x(a, 2.0 * a, x).unwrap();
        let out = classify(&generate(&case, seed).unwrap()).unwrap();
        prop_assert!(out.gram_residual <= 1e-7);
        prop_assert!(out.form_residual <= 1e-6);
    }
}
