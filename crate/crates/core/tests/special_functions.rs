use fracctl::specialfun::{
    mittag_leffler, rgamma, solution_operator_scalar, wright_omega, MLParams, MlTable, WrightDensity,
};
use fracctl::Error;
use proptest::prelude::*;

fn ml(a: f64, b: f64, z: f64) -> f64 {
    mittag_leffler(MLParams::new(a, b).unwrap(), z).unwrap()
}

#[test]
fn exponential_special_case() {
    assert!((ml(1.0, 1.0, 1.0) - std::f64::consts::E).abs() <= 1e-12);
    assert!((ml(1.0, 1.0, -3.0) - (-3.0f64).exp()).abs() <= 1e-14);
}

#[test]
fn value_at_origin_is_reciprocal_gamma() {
    for a in [0.55, 0.6, 0.75, 0.9, 1.0] {
        for b in [0.5, 0.75, 1.0, 1.5, 1.75, 2.75] {
            assert!((ml(a, b, 0.0) - rgamma(b)).abs() <= 1e-14, "a={a} b={b}");
        }
    }
}

#[test]
fn reference_values() {
    // mpmath, 40 digits
    assert!((ml(0.75, 1.75, -1.0) - 0.606_891_697_184_245_9).abs() < 1e-13);
    assert!((ml(0.75, 0.75, -0.5f64.powf(0.75)) * 0.5f64.powf(-0.25) - 0.445_936_256_842_064_1).abs() < 1e-13);
}

#[test]
fn invalid_parameters() {
    assert!(matches!(MLParams::new(1.2, 1.0), Err(Error::Domain(_))));
    assert!(matches!(MLParams::new(0.5, 0.0), Err(Error::Domain(_))));
    assert!(matches!(solution_operator_scalar(0.75, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(solution_operator_scalar(0.75, -1.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn wright_laplace_transform_matches_mittag_leffler() {
    for a in [0.6, 0.75, 0.9] {
        let w = WrightDensity::new(a, 60).unwrap();
        for z in [0.1, 1.0, 5.0] {
            let lhs = w.laplace_moment(z).unwrap();
            assert!((lhs - ml(a, a, -z)).abs() <= 1e-10, "a={a} z={z}");
        }
        assert!((w.normalization().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn wright_omega_half_closed_form() {
    let w = WrightDensity::new(0.5, 80).unwrap();
    let v = wright_omega(w, 4.0).unwrap();
    let exact = 4.0f64.powf(-1.5) * (-1.0f64 / 16.0).exp() / (2.0 * std::f64::consts::PI.sqrt());
    assert!((v.value - exact).abs() < 1e-12);
    assert!(matches!(wright_omega(w, 0.0), Err(Error::Domain(_))));
}

#[test]
fn solution_operator_values() {
    let v = solution_operator_scalar(0.75, 1.0, 1.0).unwrap();
    assert!((v - ml(0.75, 0.75, -1.0)).abs() < 1e-15);
    assert!((solution_operator_scalar(1.0, 2.0, 0.5).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
}

#[test]
fn table_reproduces_direct_evaluation() {
    let p = MLParams::new(0.75, 0.75).unwrap();
    let t = MlTable::new(p, 70.0).unwrap();
    for i in 0..200 {
        let x = 70.0 * (i as f64 + 0.37) / 200.0;
        let direct = mittag_leffler(p, -x).unwrap();
        assert!((t.eval(x).unwrap() - direct).abs() <= 1e-13 * (1e-2 + direct.abs()), "x={x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_recurrence(a in 0.55f64..1.0, b in 0.5f64..2.0, x in 0.0f64..30.0) {
        let lhs = ml(a, b, -x);
        let rhs = rgamma(b) - x * ml(a, a + b, -x);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
    }

    #[test]
    fn completely_monotone_decay(a in 0.55f64..1.0, x in 0.0f64..50.0, dx in 0.01f64..5.0) {
        let p = ml(a, 1.0, -x);
        let q = ml(a, 1.0, -x - dx);
        prop_assert!(q <= p + 1e-15);
        prop_assert!(q > 0.0);
    }
}
