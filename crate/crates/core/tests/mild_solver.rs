#![allow(clippy::excessive_precision)]

mod common;

use std::sync::Arc;

use fracctl::controllability::assemble_gramian;
use fracctl::grid::{TimeGrid, WeightedSamples};
use fracctl::mild_solver::*;
use fracctl::specialfun::{mittag_leffler, MLParams};
use fracctl::system_model::NonlocalCondition;
use fracctl::Error;

fn no_nonlocal() -> NonlocalCondition {
    NonlocalCondition::new(vec![], vec![])
}

#[test]
fn resolvent_examples() {
    let cfg = common::single_mode(0.75, 1.0, 1.0, NonlocalCondition::new(vec![0.1], vec![0.5]));
    let r = build_resolvent(&cfg).unwrap();
    // mpmath, 40 digits
    assert!((r.diag[0] - 1.0466750347109017052).abs() < 1e-13);
    assert!((r.neumann(0, 50) - r.diag[0]).abs() < 1e-12);
    let empty = build_resolvent(&common::single_mode(0.75, 1.0, 1.0, no_nonlocal())).unwrap();
    assert_eq!(empty.diag, vec![1.0]);
}

#[test]
fn heat_resolvent_matches_neumann_series() {
    let r = build_resolvent(&common::heat()).unwrap();
    assert!(r.neumann_valid);
    for n in 0..8 {
        assert!((r.neumann(n, 50) - r.diag[n]).abs() <= 1e-12 * r.diag[n].abs());
    }
}

#[test]
fn violated_smallness_is_rejected_unless_overridden() {
    let mut cfg = common::single_mode(0.75, 1.0, 1.0, NonlocalCondition::new(vec![3.0], vec![0.5]));
    let e = build_resolvent(&cfg).unwrap_err();
    assert!(matches!(e, Error::Assumption(_)));
    assert!(e.to_string().contains("nonlocal smallness condition"));
    cfg.assumption_override = true;
    let r = build_resolvent(&cfg).unwrap();
    assert!(!r.neumann_valid && r.diag[0].is_finite());
}

#[test]
fn kernel_examples() {
    let k = common::kernel(common::single_mode(0.75, 1.0, 1.0, no_nonlocal()));
    // mpmath: 0.5^(−1/4) E_{3/4,3/4}(−0.5^(3/4))
    assert!((k.kernel_value(0, 1.0, 0.5).unwrap() - 0.44593625684206413055).abs() < 1e-13);
    assert_eq!(k.kernel_value(0, 0.5, 0.7).unwrap(), 0.0);
    assert!(matches!(k.kernel_value(0, 0.5, 0.5), Err(Error::Domain(_))));
}

#[test]
fn nonlocal_kernel_support() {
    let k = common::kernel(common::heat_linear());
    // past every t_k and beyond t only the nonlocal block and nothing else can contribute
    assert_eq!(k.kernel_value(0, 0.2, 0.6).unwrap(), 0.0);
    assert!(k.kernel_value(0, 0.2, 0.4).unwrap() != 0.0);
    assert!(matches!(k.kernel_value(0, 1.0, 0.25), Err(Error::Domain(_))));
}

#[test]
fn unit_response_matches_closed_form() {
    let k = common::kernel(common::single_mode(0.75, 1.0, 1.0, no_nonlocal()));
    let disc = k.discretize(TimeGrid::uniform(1.0, 1000).unwrap()).unwrap();
    let u = WeightedSamples::from_fn(disc.grid().clone(), |_| 1.0).unwrap();
    let x = evaluate_mild_solution(&disc, ControlInput::Samples(&u), None).unwrap();
    // b^α E_{α,α+1}(−b^α) = E_{3/4,7/4}(−1) at b = 1; mpmath 0.60689169718424593823
    assert!((x.terminal_state()[0] - 0.60689169718424593823).abs() < 1e-6);
    let p = MLParams::new(0.75, 1.75).unwrap();
    assert!((mittag_leffler(p, -1.0).unwrap() - 0.60689169718424593823).abs() < 1e-14);
}

#[test]
fn gramian_matches_high_precision_quadrature() {
    let g = assemble_gramian(&common::kernel(common::heat_linear())).unwrap();
    // mpmath, 40 digits, nested quadrature of b_m b_n ∫ g_m(1,s) g_n(1,s) ds
    let refs = [
        (0, 0, 3.863772559440365748433),
        (0, 1, -1.105143346922547296076),
        (1, 1, 0.3973915618522254642562),
    ];
    for (m, n, v) in refs {
        assert!((g.matrix[(m, n)] - v).abs() < 1e-10 * v.abs(), "({m},{n}) {}", g.matrix[(m, n)]);
    }
    let s = assemble_gramian(&common::kernel(common::single_mode(0.75, 1.0, 1.0, no_nonlocal()))).unwrap();
    assert!((s.matrix[(0, 0)] - 0.60602881432846273103).abs() < 1e-12);
}

#[test]
fn mild_solution_is_linear_in_the_control() {
    let k = common::kernel(common::heat_linear());
    let disc = k.discretize(TimeGrid::refined_uniform(1.0, 100, 12).unwrap()).unwrap();
    let qa: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
    let qb: Vec<f64> = (0..8).map(|i| (i as f64 * 1.3).cos()).collect();
    let qc: Vec<f64> = qa.iter().zip(&qb).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
    let xa = disc.evaluate(ControlInput::Steering(&qa), None).unwrap();
    let xb = disc.evaluate(ControlInput::Steering(&qb), None).unwrap();
    let xc = disc.evaluate(ControlInput::Steering(&qc), None).unwrap();
    let mut combo = xa.clone();
    for ((c, a), b) in combo.weighted_modes.iter_mut().zip(&xa.weighted_modes).zip(&xb.weighted_modes) {
        for ((ci, ai), bi) in c.iter_mut().zip(a).zip(b) {
            *ci = 2.0 * ai - 3.0 * bi;
        }
    }
    assert!(combo.distance(&xc) <= 1e-12 * (1.0 + xc.norm()));
    let zero = disc.evaluate(ControlInput::None, None).unwrap();
    assert_eq!(zero.norm(), 0.0);
}

#[test]
fn steered_trajectory_satisfies_the_nonlocal_condition() {
    let cfg = common::heat_linear();
    let k = common::kernel(cfg.clone());
    let disc = k.discretize(TimeGrid::refined_uniform(1.0, 200, 24).unwrap()).unwrap();
    let q: Vec<f64> = (0..8).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let x = disc.evaluate(ControlInput::Steering(&q), None).unwrap();
    let f = reconstruct_initial_functional(&x, &cfg).unwrap();
    assert!(f.mismatch() <= 1e-6 * (1.0 + x.norm()), "{}", f.mismatch());
}

#[test]
fn classical_order_reduces_to_duhamel() {
    let k = common::kernel(common::single_mode(1.0, 2.0, 1.0, no_nonlocal()));
    let disc = k.discretize(TimeGrid::uniform(1.0, 200).unwrap()).unwrap();
    let u = WeightedSamples::from_fn(disc.grid().clone(), |t| t).unwrap();
    let x = disc.evaluate(ControlInput::Samples(&u), None).unwrap();
    for (i, &t) in disc.grid().nodes().iter().enumerate() {
        let exact = t / 2.0 - 0.25 + 0.25 * (-2.0 * t).exp();
        assert!((x.weighted_modes[0][i] - exact).abs() < 1e-10);
    }
}

#[test]
fn grid_must_end_at_the_horizon() {
    let k = common::kernel(common::heat_linear());
    assert!(matches!(
        MildDiscretization::new(Arc::clone(&k), TimeGrid::uniform(2.0, 100).unwrap()),
        Err(Error::Contract(_))
    ));
    let e = k.discretize(TimeGrid::uniform(1.0, 7).unwrap()).unwrap_err();
    assert!(e.to_string().contains("problem.nonlocal.times[0]"), "{e}");
}
