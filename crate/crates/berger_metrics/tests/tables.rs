use berger_metrics::*;
use connection::ConnectionTable;
use lagrangian::{adapted_frame, change_frame, example2_f_transition, frame_data, Example};
use proptest::prelude::*;
use sl2_core::sample_point;

fn sqrt6() -> f64 {
    6f64.sqrt()
}

fn omega(ex: Example) -> ConnectionTable {
    let (frame, _) = adapted_frame(&ex, &sample_point(8)).unwrap();
    frame_data(&ex, &frame).unwrap().omega
}

fn table(entries: &[(usize, usize, usize, f64)]) -> ConnectionTable {
    let mut t = ConnectionTable::zeros(["F1", "F2", "F3"]);
    for &(i, j, k, v) in entries {
        t.set(i - 1, j - 1, k - 1, v);
    }
    t
}

#[test]
fn timelike_reference_coefficient() {
    let m = BergerMetric::new(2.0, -1.0 / sqrt6(), Stretch::Timelike).unwrap();
    assert!((m.connection_table().get(0, 1, 2) + 5.0 / sqrt6()).abs() < 1e-14);
    for i in 0..3 {
        for k in 0..3 {
            assert_eq!(m.connection_table().get(i, i, k), 0.0);
        }
    }
}

#[test]
fn example2_f_frame_is_timelike_berger() {
    let f = change_frame(&omega(Example::Two), &example2_f_transition(0.0), ["F1", "F2", "F3"]).unwrap();
    let m = BergerMetric::new(2.0, -1.0 / sqrt6(), Stretch::Timelike).unwrap();
    let r = match_frame_constants(&f, &m.connection_table());
    assert!(r.matches && r.deviation <= 1e-8, "{}", r.deviation);
}

#[test]
fn example3_fits_spacelike_berger() {
    let fit = fit_berger(&omega(Example::Three), Stretch::Spacelike).unwrap();
    assert!(fit.residual <= 1e-7);
    assert!((fit.metric.kappa - 2.0).abs() < 1e-9);
    assert!((fit.metric.tau - 1.0 / sqrt6()).abs() < 1e-9);
    assert!(match_frame_constants(&omega(Example::Three), &fit.metric.connection_table()).matches);
}

#[test]
fn example3_is_not_timelike_berger() {
    let fit = fit_berger(&omega(Example::Three), Stretch::Timelike);
    assert!(fit.map(|f| f.residual > 1e-3).unwrap_or(true));
}

#[test]
fn identification_reproduces_product_table() {
    let a = (1.5f64).sqrt();
    let b = 1.0 / sqrt6();
    let want = table(&[(1, 2, 3, -a), (1, 3, 2, a), (2, 1, 3, a), (2, 3, 1, b), (3, 1, 2, -a), (3, 2, 1, -b)]);
    assert!(identification_table().max_diff(&want) <= 1e-8);
}

#[test]
fn identification_frame_is_the_berger_frame() {
    let m = BergerMetric::new(2.0, -1.0 / sqrt6(), Stretch::Timelike).unwrap();
    let e = m.frame().unwrap();
    for (fi, ei) in identification_frame().iter().zip(e) {
        assert!((fi.alpha - ei).max_abs() < 1e-14);
    }
}

#[test]
fn self_match() {
    let m = BergerMetric::new(1.3, 0.4, Stretch::Timelike).unwrap();
    let r = match_frame_constants(&m.connection_table(), &m.connection_table());
    assert!(r.matches);
    assert_eq!(r.deviation, 0.0);
}

fn params() -> impl Strategy<Value = (f64, f64)> {
    (0.1f64..5.0, prop_oneof![-3.0f64..-0.1, 0.1f64..3.0])
}

proptest! {
    #[test]
    fn closed_form_matches_koszul((kappa, tau) in params(), spacelike in any::<bool>()) {
        let stretch = if spacelike { Stretch::Spacelike } else { Stretch::Timelike };
        let m = BergerMetric::new(kappa, tau, stretch).unwrap();
        prop_assert!(m.frame_residual().unwrap() < 1e-9);
        let t = m.connection_table();
        prop_assert!(match_frame_constants(&t, &m.koszul_table().unwrap()).deviation < 1e-9);
        prop_assert!(m.torsion_residual(&t).unwrap() < 1e-9);
        prop_assert!(t.compatibility_residual(SIGNS) < 1e-9);
    }

    #[test]
    fn metric_is_symmetric_and_lorentzian((kappa, tau) in params(), spacelike in any::<bool>(),
                                          x in prop::array::uniform3(-1.0f64..1.0), y in prop::array::uniform3(-1.0f64..1.0)) {
        let stretch = if spacelike { Stretch::Spacelike } else { Stretch::Timelike };
        let m = BergerMetric::new(kappa, tau, stretch).unwrap();
        let (x, y) = (sl2_core::Sl2Elem::from_array(x), sl2_core::Sl2Elem::from_array(y));
        prop_assert!((berger_eval(&m, &x, &y) - berger_eval(&m, &y, &x)).abs() < 1e-12);
        prop_assert!(m.gram_determinant() < 0.0);
    }

    #[test]
    fn unstretched_is_rescaled_round(tau in 0.1f64..2.0, x in prop::array::uniform3(-1.0f64..1.0)) {
        let kappa = 4.0 * tau * tau;
        let m = BergerMetric::new(kappa, tau, Stretch::Timelike).unwrap();
        let x = sl2_core::Sl2Elem::from_array(x);
        prop_assert!((m.eval(&x, &x) - 4.0 / kappa * sl2_core::inner_sl2(&x, &x)).abs() < 1e-12);
    }
}
