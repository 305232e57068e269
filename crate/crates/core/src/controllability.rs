//! Controllability Gramian, regularized resolvent, and steering-control synthesis.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::grid::WeightedSamples;
use crate::mild_solver::{ControlInput, KernelEvaluator, MildDiscretization, Trajectory};
use crate::system_model::{subgradient_selection, SelectionRule};

/// `Γ_{mn} = ∫₀ᵇ b_m g_m(b, s) b_n g_n(b, s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianData {
    pub matrix: DMatrix<f64>,
    /// Eigenvalues in ascending order.
    pub eigen_spectrum: Vec<f64>,
    /// Number of adaptive cross integrals behind the entries.
    pub quadrature_nodes: usize,
}

impl GramianData {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Contract("Gramian must be square".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite Gramian entry".into()));
        }
        let mut eigen_spectrum: Vec<f64> = SymmetricEigen::new(matrix.clone()).eigenvalues.iter().copied().collect();
        eigen_spectrum.sort_by(f64::total_cmp);
        Ok(GramianData {
            matrix,
            eigen_spectrum,
            quadrature_nodes: 0,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen_spectrum[0]
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }
}

pub fn assemble_gramian(k: &KernelEvaluator) -> Result<GramianData> {
    let cfg = k.config();
    if cfg.alpha <= 0.5 {
        return Err(Error::Domain(format!(
            "α = {} makes (b−s)^(2α−2) non-integrable; need α > 1/2",
            cfg.alpha
        )));
    }
    let b = DVector::from_column_slice(cfg.control.b_coeffs());
    let c = k.terminal_cross_gram();
    let n = b.len();
    let matrix = DMatrix::from_fn(n, n, |i, j| b[i] * c[(i, j)] * b[j]);
    let mut g = GramianData::from_matrix(matrix)?;
    let per_entry = 2 * (cfg.nonlocal.len() + 1) * (cfg.nonlocal.len() + 1);
    g.quadrature_nodes = n * (n + 1) / 2 * per_entry;
    Ok(g)
}

/// `R(a, Γ) h` and `a R(a, Γ) h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventApplication {
    pub resolvent: DVector<f64>,
    pub scaled: DVector<f64>,
}

pub fn regularized_resolvent_apply(g: &GramianData, a: f64, h: &DVector<f64>) -> Result<ResolventApplication> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("regularization a = {a} must be positive")));
    }
    let n = g.matrix.nrows();
    if h.len() != n {
        return Err(Error::Contract(format!("vector of length {} for a {n}×{n} Gramian", h.len())));
    }
    let m = &g.matrix + DMatrix::identity(n, n) * a;
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Numeric(format!("aI + Γ is not positive definite at a = {a}")))?;
    let resolvent = chol.solve(h);
    let scaled = &resolvent * a;
    Ok(ResolventApplication { resolvent, scaled })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem {
    pub target_x1: Vec<f64>,
    pub reg_a: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub relaxation: f64,
}

impl SynthesisProblem {
    pub fn new(target_x1: Vec<f64>, reg_a: f64) -> Self {
        SynthesisProblem {
            target_x1,
            reg_a,
            max_iters: 50,
            tol: 1e-9,
            relaxation: 1.0,
        }
    }

    pub fn validate(&self, modes: usize) -> Result<()> {
        if self.target_x1.len() != modes {
            return Err(Error::validation(
                "target_x1",
                format!("has {} entries for {modes} modes", self.target_x1.len()),
            ));
        }
        if !(self.reg_a > 0.0) {
            return Err(Error::validation("reg_a", format!("a = {} must be positive", self.reg_a)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::validation("tol", format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::validation("max_iters", "must be at least 1"));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::validation(
                "relaxation",
                format!("{} outside (0, 1]", self.relaxation),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub trajectory: Trajectory,
    pub control_samples: WeightedSamples,
    /// Selection `f` as plain modal samples.
    pub selection: Trajectory,
    /// Coefficients `q = R(a, Γ) P` of the steering control.
    pub steering: Vec<f64>,
    pub terminal_error: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖Φ_a(x) − x‖` in the weighted sup norm.
    pub residual: f64,
    /// `‖x(b) − (x₁ − a R(a, Γ) P)‖`.
    pub identity_defect: f64,
    /// `∫₀ᵇ u(s)² ds`.
    pub control_energy: f64,
}

/// Selection along `x`; the node `t = 0` reuses the state at the first positive node.
pub fn selection_along(disc: &MildDiscretization, x: &Trajectory, rule: SelectionRule) -> Result<Trajectory> {
    let term = disc.kernel().config().nonsmooth.clone();
    let t = x.grid.nodes();
    let mut f = Trajectory::zeros(x.grid.clone(), x.modes(), 1.0);
    for i in 0..t.len() {
        let j = i.max(1);
        let v = subgradient_selection(term.as_ref(), t[j], &x.state_at(j), rule)?;
        for (fm, vn) in f.weighted_modes.iter_mut().zip(v) {
            fm[i] = vn;
        }
    }
    Ok(f)
}

fn terminal_vector(x: &Trajectory) -> DVector<f64> {
    DVector::from_vec(x.terminal_state())
}

/// Picard iteration of `Φ_a` from `x⁰ = 0`.
pub fn synthesize_control(
    disc: &MildDiscretization,
    gram: &GramianData,
    prob: &SynthesisProblem,
) -> Result<SynthesisResult> {
    let k = disc.kernel();
    let nn = k.modes();
    prob.validate(nn)?;
    let x1 = DVector::from_column_slice(&prob.target_x1);
    let alpha = k.config().alpha;
    let mut x = Trajectory::zeros(disc.grid().clone(), nn, alpha);
    let mut iterations = 0;
    loop {
        let f = selection_along(disc, &x, SelectionRule::MinimalNorm)?;
        let free = disc.evaluate(ControlInput::None, Some(&f))?;
        let p = &x1 - terminal_vector(&free);
        let r = regularized_resolvent_apply(gram, prob.reg_a, &p)?;
        let q: Vec<f64> = r.resolvent.iter().copied().collect();
        let steered = disc.evaluate(ControlInput::Steering(&q), None)?;
        let mut phi = steered;
        for (a, b) in phi.weighted_modes.iter_mut().zip(&free.weighted_modes) {
            for (u, v) in a.iter_mut().zip(b) {
                *u += v;
            }
        }
        if !phi.is_finite() {
            return Err(Error::Numeric(format!("iteration {iterations} produced non-finite values")));
        }
        let increment = phi.distance(&x);
        let converged = increment < prob.tol;
        if converged || iterations >= prob.max_iters {
            let xb = terminal_vector(&x);
            let expected = &x1 - &r.scaled;
            let qv = DVector::from_column_slice(&q);
            return Ok(SynthesisResult {
                control_samples: disc.steering_samples(&q)?,
                terminal_error: (&xb - &x1).norm(),
                identity_defect: (terminal_vector(&phi) - expected).norm(),
                control_energy: qv.dot(&(&gram.matrix * &qv)),
                trajectory: x,
                selection: f,
                steering: q,
                iterations,
                converged,
                residual: increment,
            });
        }
        x = x.blend(&phi, prob.relaxation);
        iterations += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub terminal_error: f64,
    pub control_energy: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs the synthesis for each `a` in a strictly decreasing positive grid.
pub fn regularization_sweep(
    disc: &MildDiscretization,
    gram: &GramianData,
    x1: &[f64],
    a_grid: &[f64],
    template: &SynthesisProblem,
) -> Result<Vec<SweepRow>> {
    if a_grid.is_empty() {
        return Err(Error::validation("a_grid", "a_grid must be nonempty"));
    }
    if a_grid.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::validation("a_grid", "every a must be positive"));
    }
    if a_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::validation("a_grid", "a_grid must be strictly decreasing"));
    }
    disc.prepare_steering();
    a_grid
        .iter()
        .map(|&a| {
            let prob = SynthesisProblem {
                target_x1: x1.to_vec(),
                reg_a: a,
                ..template.clone()
            };
            let r = synthesize_control(disc, gram, &prob)?;
            Ok(SweepRow {
                a,
                terminal_error: r.terminal_error,
                control_energy: r.control_energy,
                iterations: r.iterations,
                converged: r.converged,
            })
        })
        .collect()
}
