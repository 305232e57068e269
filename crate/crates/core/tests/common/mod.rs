#![allow(dead_code)]

use std::sync::Arc;

use fracctl::mild_solver::KernelEvaluator;
use fracctl::system_model::{
    ControlOperator, NonlocalCondition, NonsmoothTerm, ProblemConfig, SpectralOperator, WeightedAbs, ZeroTerm,
};

pub fn heat_problem(nonsmooth: Arc<dyn NonsmoothTerm>) -> ProblemConfig {
    ProblemConfig {
        alpha: 0.75,
        horizon_b: 1.0,
        operator: SpectralOperator::dirichlet_laplacian(8),
        control: ControlOperator::linear_profile(8),
        nonlocal: NonlocalCondition::new(vec![0.1, 0.05], vec![0.25, 0.5]),
        nonsmooth,
        semigroup_bound_m: 1.0,
        holder_gamma: 0.0,
        assumption_override: false,
        compact_semigroup: true,
        measurable_forcing: true,
    }
}

pub fn heat() -> ProblemConfig {
    heat_problem(Arc::new(WeightedAbs::uniform(0.1, 8)))
}

pub fn heat_linear() -> ProblemConfig {
    heat_problem(Arc::new(ZeroTerm { modes: 8 }))
}

pub fn single_mode(alpha: f64, lambda: f64, b_coeff: f64, nonlocal: NonlocalCondition) -> ProblemConfig {
    ProblemConfig {
        alpha,
        horizon_b: 1.0,
        operator: SpectralOperator::new(vec![lambda], vec!["e1".into()]).unwrap(),
        control: ControlOperator::new(vec![b_coeff]).unwrap(),
        nonlocal,
        nonsmooth: Arc::new(ZeroTerm { modes: 1 }),
        semigroup_bound_m: 1.0,
        holder_gamma: 0.0,
        assumption_override: false,
        compact_semigroup: true,
        measurable_forcing: true,
    }
}

pub fn kernel(cfg: ProblemConfig) -> Arc<KernelEvaluator> {
    Arc::new(KernelEvaluator::new(cfg).unwrap())
}

pub fn heat_target() -> Vec<f64> {
    let s = (std::f64::consts::PI / 2.0).sqrt();
    let mut x1 = vec![0.0; 8];
    x1[0] = s;
    x1[1] = 0.5 * s;
    x1
}
