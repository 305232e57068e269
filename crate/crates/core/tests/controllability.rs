#![allow(clippy::excessive_precision)]

mod common;

use std::sync::Arc;

use fracctl::controllability::*;
use fracctl::grid::TimeGrid;
use fracctl::mild_solver::KernelEvaluator;
use fracctl::quadrature::GaussRule;
use fracctl::system_model::{ControlOperator, NonlocalCondition, SpectralOperator, ZeroTerm};
use fracctl::Error;
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const LAMBDA: [f64; 2] = [1.0, 4.0];
const B: [f64; 2] = [1.0, -0.5];

fn classical_kernel() -> Arc<KernelEvaluator> {
    let mut cfg = common::single_mode(1.0, 1.0, 1.0, NonlocalCondition::none());
    cfg.operator = SpectralOperator::new(LAMBDA.to_vec(), vec!["e1".into(), "e2".into()]).unwrap();
    cfg.control = ControlOperator::new(B.to_vec()).unwrap();
    cfg.nonsmooth = Arc::new(ZeroTerm { modes: 2 });
    common::kernel(cfg)
}

fn exponential_gramian() -> DMatrix<f64> {
    DMatrix::from_fn(2, 2, |m, n| {
        let s = LAMBDA[m] + LAMBDA[n];
        B[m] * B[n] * (1.0 - (-s).exp()) / s
    })
}

#[test]
fn heat_gramian_is_symmetric_positive_definite() {
    let g = assemble_gramian(&common::kernel(common::heat_linear())).unwrap();
    assert!(g.asymmetry() <= 1e-12 * g.matrix.norm());
    assert!(g.min_eigenvalue() > 0.0);
    assert!(g.eigen_spectrum.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn unactuated_mode_makes_the_gramian_singular() {
    let mut cfg = common::heat_linear();
    let mut b = cfg.control.b_coeffs().to_vec();
    b[2] = 0.0;
    cfg.control = ControlOperator::new(b).unwrap();
    let g = assemble_gramian(&common::kernel(cfg)).unwrap();
    assert!(g.min_eigenvalue().abs() <= 1e-10);
    for j in 0..8 {
        assert_eq!(g.matrix[(2, j)], 0.0);
    }
}

#[test]
fn gramian_requires_square_integrable_kernel() {
    let cfg = common::single_mode(0.5, 1.0, 1.0, NonlocalCondition::none());
    let k = KernelEvaluator::new(cfg);
    match k {
        Err(e) => assert!(matches!(e, Error::Validation { .. })),
        Ok(k) => assert!(matches!(assemble_gramian(&k), Err(Error::Domain(_)))),
    }
}

#[test]
fn classical_gramian_matches_exponential_closed_form() {
    let g = assemble_gramian(&classical_kernel()).unwrap();
    assert!((&g.matrix - exponential_gramian()).norm() < 1e-13);
}

#[test]
fn resolvent_identity_on_random_vectors() {
    let g = assemble_gramian(&common::kernel(common::heat_linear())).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let h = DVector::from_fn(8, |_, _| rng.gen_range(-1.0..1.0));
        let a = 10f64.powf(rng.gen_range(-3.0..0.0));
        let r = regularized_resolvent_apply(&g, a, &h).unwrap();
        let back = &r.resolvent * a + &g.matrix * &r.resolvent;
        assert!((back - &h).norm() <= 1e-12 * h.norm());
        assert!((&r.scaled - &r.resolvent * a).norm() <= 1e-15 * h.norm());
    }
}

#[test]
fn regularization_vanishes_for_positive_gramian() {
    let g = GramianData::from_matrix(DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0])).unwrap();
    let h = DVector::from_vec(vec![1.0, -2.0]);
    let mut prev = f64::INFINITY;
    for k in 0..=8 {
        let n = regularized_resolvent_apply(&g, 10f64.powi(-k), &h).unwrap().scaled.norm();
        assert!(n < prev);
        prev = n;
    }
    assert!(prev < 1e-4);
}

#[test]
fn linear_synthesis_is_the_regularized_closed_form() {
    let k = common::kernel(common::single_mode(0.75, 1.0, 1.0, NonlocalCondition::none()));
    let disc = k.discretize(TimeGrid::refined_uniform(1.0, 200, 24).unwrap()).unwrap();
    let g = assemble_gramian(&k).unwrap();
    let g11 = 0.60602881432846273103;
    for a in [1.0, 1e-2, 1e-4] {
        let r = synthesize_control(&disc, &g, &SynthesisProblem::new(vec![1.0], a)).unwrap();
        assert!(r.converged);
        assert!((r.terminal_error - a / (a + g11)).abs() < 1e-8, "{}", r.terminal_error);
        assert!(r.identity_defect < 1e-8);
    }
}

#[test]
fn classical_control_is_the_tikhonov_minimizer() {
    let k = classical_kernel();
    let disc = k.discretize(TimeGrid::uniform(1.0, 400).unwrap()).unwrap();
    let g = assemble_gramian(&k).unwrap();
    let x1 = vec![1.0, 0.5];
    let a = 1e-2;
    let r = synthesize_control(&disc, &g, &SynthesisProblem::new(x1.clone(), a)).unwrap();

    let gram = exponential_gramian();
    let q = (DMatrix::identity(2, 2) * a + &gram).lu().solve(&DVector::from_vec(x1.clone())).unwrap();
    for (qi, ri) in q.iter().zip(&r.steering) {
        assert!((qi - ri).abs() < 1e-10);
    }
    let u = |s: f64| (0..2).map(|m| B[m] * (-LAMBDA[m] * (1.0 - s)).exp() * q[m]).sum::<f64>();
    let nodes = disc.grid().nodes();
    // the indicator convention zeroes the node s = b
    assert_eq!(*r.control_samples.weighted_values.last().unwrap(), 0.0);
    for (i, &s) in nodes.iter().enumerate().take(nodes.len() - 1) {
        assert!((r.control_samples.weighted_values[i] - u(s)).abs() < 1e-8);
    }
    assert!((r.terminal_error - a * q.norm()).abs() < 1e-8);

    // J(u) = ‖x(b) − x₁‖² + a‖u‖² by Gauss–Legendre quadrature; u must not be improvable
    let rule = GaussRule::legendre(60);
    let int = |f: &dyn Fn(f64) -> f64| 0.5 * rule.apply(0.0, 1.0, f);
    let cost = |v: &dyn Fn(f64) -> f64| {
        let xb: Vec<f64> = (0..2)
            .map(|n| int(&|s| B[n] * (-LAMBDA[n] * (1.0 - s)).exp() * v(s)))
            .collect();
        let miss: f64 = xb.iter().zip(&x1).map(|(x, t)| (x - t).powi(2)).sum();
        miss + a * int(&|s| v(s).powi(2))
    };
    let j0 = cost(&u);
    let dirs: [fn(f64) -> f64; 4] = [|s| s.cos(), |s| (3.0 * s).sin(), |s| s * s, |_| 1.0];
    for d in dirs {
        for eps in [1e-2, -1e-2, 1e-4, -1e-4] {
            assert!(cost(&|s| u(s) + eps * d(s)) >= j0 - 1e-14);
        }
    }
}

#[test]
fn nonsmooth_heat_synthesis_converges() {
    let k = common::kernel(common::heat());
    let disc = k.discretize(TimeGrid::refined_uniform(1.0, 200, 24).unwrap()).unwrap();
    let g = assemble_gramian(&k).unwrap();
    let mut p = SynthesisProblem::new(common::heat_target(), 1e-3);
    p.tol = 1e-10;
    let r = synthesize_control(&disc, &g, &p).unwrap();
    assert!(r.converged && r.iterations <= 50);
    assert!(r.residual < 1e-6);
    assert!(r.identity_defect < 1e-8);
    assert!(r.control_energy > 0.0);
}

#[test]
fn sweep_rejects_bad_grids() {
    let k = common::kernel(common::single_mode(0.75, 1.0, 1.0, NonlocalCondition::none()));
    let disc = k.discretize(TimeGrid::uniform(1.0, 50).unwrap()).unwrap();
    let g = assemble_gramian(&k).unwrap();
    let t = SynthesisProblem::new(vec![1.0], 1.0);
    let msg = |grid: &[f64]| regularization_sweep(&disc, &g, &[1.0], grid, &t).unwrap_err().to_string();
    assert!(msg(&[]).contains("a_grid must be nonempty"));
    assert!(msg(&[1.0, 1.0]).contains("strictly decreasing"));
    assert!(msg(&[1.0, -1.0]).contains("positive"));
}
