//! Experiment drivers behind the command-line interface.

pub mod config;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

pub use config::{load_config, preset, resolve, ExperimentConfig, RawConfig};

use crate::controllability::{
    assemble_gramian, regularization_sweep, selection_along, synthesize_control, SweepRow, SynthesisProblem,
    SynthesisResult,
};
use crate::error::{Error, Result};
use crate::fractional_oracle::step_scalar_fode;
use crate::grid::{TimeGrid, WeightedSamples};
use crate::mild_solver::{reconstruct_initial_functional, ControlInput, KernelEvaluator, Trajectory};
use crate::specialfun::solution_operator_scalar;
use crate::system_model::{
    check_actuation_nondegeneracy, check_assumption_smallness, check_growth_ratio, ActuationReport,
    ControlOperator, GrowthReport, NonlocalCondition, ProblemConfig, SelectionRule, SmallnessReport,
    SpectralOperator, ZeroTerm,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub smallness: SmallnessReport,
    pub growth: std::result::Result<GrowthReport, String>,
    pub actuation: ActuationReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.smallness.holds
            && matches!(&self.growth, Ok(g) if g.holds)
            && self.actuation.zero_modes.is_empty()
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.smallness;
        writeln!(
            f,
            "[{}] nonlocal smallness condition: Σ|c_k t_k^(α−1)| = {:.10e} < Γ(α)/M = {:.10e}",
            verdict(s.holds),
            s.lhs,
            s.rhs
        )?;
        match &self.growth {
            Ok(g) => writeln!(
                f,
                "[{}] growth condition: liminf ψ(r)/r·‖P‖ ≈ {:.6e} < 1 (‖P‖ = {:.6e})",
                verdict(g.holds),
                g.rho_estimate,
                g.p_norm
            )?,
            Err(e) => writeln!(f, "[FAIL] growth condition: {e}")?,
        }
        let a = &self.actuation;
        if a.zero_modes.is_empty() {
            writeln!(f, "[PASS] actuation nondegeneracy: every ⟨b, e_n⟩ ≠ 0")?;
        } else {
            let list: Vec<String> = a.zero_modes.iter().map(|m| m.to_string()).collect();
            writeln!(f, "[FAIL] actuation nondegeneracy: ⟨b, e_n⟩ = 0 for modes {}", list.join(", "))?;
        }
        write!(f, "overall: {}", verdict(self.passed()))
    }
}

/// Radii `10^0 … 10^6` used for the growth-ratio estimate.
pub fn default_r_grid() -> Vec<f64> {
    (0..=24).map(|k| 10f64.powf(k as f64 / 4.0)).collect()
}

pub fn run_verify(cfg: &ExperimentConfig) -> VerifyReport {
    let p = &cfg.problem;
    VerifyReport {
        smallness: check_assumption_smallness(p),
        growth: check_growth_ratio(p, &default_r_grid()).map_err(|e| e.to_string()),
        actuation: check_actuation_nondegeneracy(p),
    }
}

fn require_verified(cfg: &ExperimentConfig, force: bool) -> Result<()> {
    let report = run_verify(cfg);
    if report.passed() || force {
        Ok(())
    } else {
        Err(Error::Assumption(format!(
            "hypothesis checks failed (use --force to run anyway):\n{report}"
        )))
    }
}

fn problem_for_run(cfg: &ExperimentConfig, force: bool) -> ProblemConfig {
    let mut p = cfg.problem.clone();
    if force {
        p.assumption_override = true;
    }
    p
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub trajectory: Trajectory,
    pub iterations: usize,
    pub converged: bool,
    pub increment: f64,
    pub nonlocal_mismatch: f64,
}

impl fmt::Display for SimulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = &self.trajectory;
        writeln!(f, "grid nodes: {}", x.grid.len())?;
        writeln!(
            f,
            "fixed point: converged={} after {} iterations (increment {:.3e})",
            self.converged, self.iterations, self.increment
        )?;
        writeln!(f, "weighted norm sup t^(1−α)‖x(t)‖ = {:.10e}", x.norm())?;
        writeln!(f, "nonlocal condition mismatch = {:.3e}", self.nonlocal_mismatch)?;
        let xb: Vec<String> = x.terminal_state().iter().map(|v| format!("{v:.10e}")).collect();
        write!(f, "x(b) = [{}]", xb.join(", "))
    }
}

/// Open-loop solve with constant control `u ≡ simulate_control`, iterating the selection.
pub fn run_simulate(cfg: &ExperimentConfig, force: bool) -> Result<SimulationReport> {
    require_verified(cfg, force)?;
    let k = Arc::new(KernelEvaluator::new(problem_for_run(cfg, force))?);
    let grid = cfg.grid()?;
    let disc = k.discretize(grid.clone())?;
    let u = WeightedSamples::from_fn(grid.clone(), |_| cfg.simulate_control)?;
    let mut x = Trajectory::zeros(grid, k.modes(), k.config().alpha);
    let mut iterations = 0;
    loop {
        let f = selection_along(&disc, &x, SelectionRule::MinimalNorm)?;
        let next = disc.evaluate(ControlInput::Samples(&u), Some(&f))?;
        let increment = next.distance(&x);
        let converged = increment < cfg.tol;
        if converged || iterations >= cfg.max_iters {
            let nonlocal_mismatch = reconstruct_initial_functional(&next, k.config())?.mismatch();
            return Ok(SimulationReport {
                trajectory: next,
                iterations,
                converged,
                increment,
                nonlocal_mismatch,
            });
        }
        x = x.blend(&next, cfg.relaxation);
        iterations += 1;
    }
}

pub fn write_trajectory_csv(path: &Path, x: &Trajectory) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = std::fs::File::create(path).map_err(io)?;
    let mut text = String::from("t");
    for n in 1..=x.modes() {
        text.push_str(&format!(",w_{n}"));
    }
    text.push('\n');
    for (i, t) in x.grid.nodes().iter().enumerate() {
        text.push_str(&format!("{t:.16e}"));
        for w in &x.weighted_modes {
            text.push_str(&format!(",{:.16e}", w[i]));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(io)
}

/// Steering-control synthesis at a single regularization level.
pub fn run_synthesize(cfg: &ExperimentConfig, reg_a: f64, force: bool) -> Result<SynthesisResult> {
    require_verified(cfg, force)?;
    let k = Arc::new(KernelEvaluator::new(problem_for_run(cfg, force))?);
    let disc = k.discretize(cfg.grid()?)?;
    let gram = assemble_gramian(&k)?;
    let prob = SynthesisProblem {
        target_x1: cfg.target_x1.clone(),
        reg_a,
        max_iters: cfg.max_iters,
        tol: cfg.tol,
        relaxation: cfg.relaxation,
    };
    synthesize_control(&disc, &gram, &prob)
}

pub fn write_control_csv(path: &Path, u: &WeightedSamples) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut text = String::from("t,u\n");
    for (t, v) in u.grid.nodes().iter().zip(&u.weighted_values) {
        text.push_str(&format!("{t:.16e},{v:.16e}\n"));
    }
    std::fs::write(path, text).map_err(io)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<SweepRow>,
    pub config_sha256: String,
    pub grid_size: usize,
    pub version: String,
}

impl ResultTable {
    /// CSV text; the `generated_unix` line is the only time-dependent content.
    pub fn to_csv(&self, generated_unix: u64) -> String {
        let mut s = format!(
            "# version={}\n# config_sha256={}\n# grid_size={}\n# generated_unix={}\n",
            self.version, self.config_sha256, self.grid_size, generated_unix
        );
        s.push_str("a,terminal_error,control_energy,iterations,converged\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{},{}\n",
                r.a, r.terminal_error, r.control_energy, r.iterations, r.converged
            ));
        }
        s
    }
}

pub fn run_sweep(cfg: &ExperimentConfig, force: bool) -> Result<ResultTable> {
    require_verified(cfg, force)?;
    let k = Arc::new(KernelEvaluator::new(problem_for_run(cfg, force))?);
    let disc = k.discretize(cfg.grid()?)?;
    let gram = assemble_gramian(&k)?;
    let template = SynthesisProblem {
        target_x1: cfg.target_x1.clone(),
        reg_a: cfg.a_grid[0],
        max_iters: cfg.max_iters,
        tol: cfg.tol,
        relaxation: cfg.relaxation,
    };
    let rows = regularization_sweep(&disc, &gram, &cfg.target_x1, &cfg.a_grid, &template)?;
    Ok(ResultTable {
        rows,
        config_sha256: cfg.sha256.clone(),
        grid_size: cfg.grid_size,
        version: VERSION.to_string(),
    })
}

pub fn write_sweep_csv(path: &Path, table: &ResultTable) -> Result<()> {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    std::fs::write(path, table.to_csv(now)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Mild formula versus time stepper for `D^α x = −λx + u`, `u ≡ 1`, zero initial data.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub alpha: f64,
    pub lambda: f64,
    /// `(M, weighted-sup relative error)`.
    pub refinement: Vec<(usize, f64)>,
    /// Smallest order over consecutive refinements.
    pub observed_order: f64,
    /// Errors of the mild formula and stepper at `α = 1` against `(1 − e^{−λt})/λ`.
    pub classical_mild_error: f64,
    pub classical_stepper_error: f64,
    /// Free evolution with `λ = 0`: deviation of both from `t^{α−1}/Γ(α)`.
    pub free_mild_error: f64,
    pub free_stepper_error: f64,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "single mode: α = {}, λ = {}, u ≡ 1", self.alpha, self.lambda)?;
        for (m, e) in &self.refinement {
            writeln!(f, "  M = {m:>6}: weighted-sup relative error {e:.6e}")?;
        }
        writeln!(f, "observed order: {:.3}", self.observed_order)?;
        writeln!(
            f,
            "α = 1 reduction: mild {:.3e}, stepper {:.3e} (vs classical solution)",
            self.classical_mild_error, self.classical_stepper_error
        )?;
        write!(
            f,
            "free evolution: mild {:.3e}, stepper {:.3e} (vs t^(α−1)/Γ(α))",
            self.free_mild_error, self.free_stepper_error
        )
    }
}

fn single_mode(alpha: f64, lambda: f64, b: f64) -> Result<ProblemConfig> {
    let cfg = ProblemConfig {
        alpha,
        horizon_b: b,
        operator: SpectralOperator::new(vec![lambda], vec!["e1".into()])?,
        control: ControlOperator::new(vec![1.0])?,
        nonlocal: NonlocalCondition::none(),
        nonsmooth: Arc::new(ZeroTerm { modes: 1 }),
        semigroup_bound_m: 1.0,
        holder_gamma: 0.0,
        assumption_override: false,
        compact_semigroup: true,
        measurable_forcing: true,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Weighted mild solution of the single-mode problem with `u ≡ 1` on a uniform grid.
pub fn mild_unit_response(alpha: f64, lambda: f64, b: f64, m: usize) -> Result<Trajectory> {
    let k = Arc::new(KernelEvaluator::new(single_mode(alpha, lambda, b)?)?);
    let grid = TimeGrid::uniform(b, m)?;
    let disc = k.discretize(grid.clone())?;
    let u = WeightedSamples::from_fn(grid, |_| 1.0)?;
    disc.evaluate(ControlInput::Samples(&u), None)
}

fn relative_sup(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

pub fn oracle_comparison(alpha: f64, lambda: f64, b: f64, m: usize) -> Result<f64> {
    let mild = mild_unit_response(alpha, lambda, b, m)?;
    let step = step_scalar_fode(alpha, lambda, &|_| 1.0, 0.0, &mild.grid)?;
    Ok(relative_sup(&mild.weighted_modes[0], &step.weighted_values))
}

/// Refinement study on `M/4, M/2, M` steps using the first mode of the configuration.
pub fn run_oracle_check(cfg: &ExperimentConfig, m: usize) -> Result<OracleReport> {
    let alpha = cfg.problem.alpha;
    let lambda = cfg.problem.operator.eigenvalues()[0];
    let b = cfg.problem.horizon_b;
    if m < 16 {
        return Err(Error::validation("grid_size", "oracle check needs at least 16 steps"));
    }
    let sizes = [m / 4, m / 2, m];
    let refinement = sizes
        .iter()
        .map(|&mm| Ok((mm, oracle_comparison(alpha, lambda, b, mm)?)))
        .collect::<Result<Vec<_>>>()?;
    let observed_order = refinement
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).log2())
        .fold(f64::INFINITY, f64::min);

    let mild = mild_unit_response(1.0, lambda, b, m)?;
    let step = step_scalar_fode(1.0, lambda, &|_| 1.0, 0.0, &mild.grid)?;
    let exact: Vec<f64> = mild.grid.nodes().iter().map(|t| (1.0 - (-lambda * t).exp()) / lambda).collect();
    let err = |v: &[f64]| v.iter().zip(&exact).fold(0.0f64, |acc, (a, e)| acc.max((a - e).abs()));

    let grid = TimeGrid::uniform(b, m)?;
    let free_step = step_scalar_fode(alpha, 0.0, &|_| 0.0, 1.0, &grid)?;
    let target = 1.0 / statrs::function::gamma::gamma(alpha);
    let mut free_mild_error: f64 = 0.0;
    for &t in grid.nodes().iter().skip(1) {
        free_mild_error = free_mild_error.max((solution_operator_scalar(alpha, 0.0, t)? - target).abs());
    }
    let free_stepper_error = free_step
        .weighted_values
        .iter()
        .fold(0.0f64, |acc, v| acc.max((v - target).abs()));
    Ok(OracleReport {
        alpha,
        lambda,
        refinement,
        observed_order,
        classical_mild_error: err(&mild.weighted_modes[0]),
        classical_stepper_error: err(&step.weighted_values),
        free_mild_error,
        free_stepper_error,
    })
}
