//! Mild solutions of the nonlocal problem in spectral coordinates.
//!
//! Mode `n` of the solution is
//! `x_n(t) = t^{α−1} E_n(t) O_n Σ_k c_k y_n(t_k) + y_n(t)` with
//! `y_n(t) = ∫₀^t k_n(t−s) h_n(s) ds`, `k_n(σ) = σ^{α−1} E_{α,α}(−λ_n σ^α)`,
//! and `h = Bu + f`. Sampled data is integrated with moment-exact product
//! weights; steering controls built from kernel columns are integrated
//! through precomputed cross integrals of kernel pairs.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::grid::{TimeGrid, WeightedSamples};
use crate::quadrature::{integrate_breaks, Tolerance};
use crate::specialfun::{solution_operator_scalar, MlFamily, ModeEvaluator};
use crate::system_model::{check_assumption_smallness, ProblemConfig};

/// Diagonal of `O = (I − Σ c_k t_k^{α−1} T_α(t_k))⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalResolvent {
    pub diag: Vec<f64>,
    /// `S_n = Σ_k c_k t_k^{α−1} E_n(t_k)`.
    pub sums: Vec<f64>,
    pub neumann_valid: bool,
}

impl NonlocalResolvent {
    /// Partial sum `Σ_{j<terms} S_n^j` of the Neumann series.
    pub fn neumann(&self, mode: usize, terms: usize) -> f64 {
        let s = self.sums[mode];
        let mut acc = 0.0;
        let mut p = 1.0;
        for _ in 0..terms {
            acc += p;
            p *= s;
        }
        acc
    }
}

pub fn build_resolvent(cfg: &ProblemConfig) -> Result<NonlocalResolvent> {
    let small = check_assumption_smallness(cfg);
    if !small.holds && !cfg.assumption_override {
        return Err(Error::Assumption(format!(
            "nonlocal smallness condition violated: Σ|c_k t_k^(α−1)| = {} is not below Γ(α)/M = {}",
            small.lhs, small.rhs
        )));
    }
    let a = cfg.alpha;
    let mut diag = Vec::with_capacity(cfg.truncation_n());
    let mut sums = Vec::with_capacity(cfg.truncation_n());
    for (n, &lam) in cfg.operator.eigenvalues().iter().enumerate() {
        let mut s = 0.0;
        for (&c, &t) in cfg.nonlocal.coefficients.iter().zip(&cfg.nonlocal.times) {
            s += c * t.powf(a - 1.0) * solution_operator_scalar(a, lam, t)?;
        }
        if (1.0 - s).abs() <= 1e-13 {
            return Err(Error::SingularResolvent { mode: n + 1 });
        }
        sums.push(s);
        diag.push(1.0 / (1.0 - s));
    }
    Ok(NonlocalResolvent {
        diag,
        sums,
        neumann_valid: small.holds,
    })
}

/// Kernel `G(t, s)` of the mild-solution representation, mode by mode.
#[derive(Debug)]
pub struct KernelEvaluator {
    cfg: ProblemConfig,
    resolvent: NonlocalResolvent,
    modes: Vec<ModeEvaluator>,
    /// `A_n = b^{α−1} E_n(b) O_n`.
    amp: Vec<f64>,
    nonlocal_block: OnceLock<Vec<f64>>,
    terminal: OnceLock<DMatrix<f64>>,
}

const CROSS_TOL: Tolerance = Tolerance {
    abs: 1e-16,
    rel: 1e-13,
    max_intervals: 2000,
};

impl KernelEvaluator {
    pub fn new(cfg: ProblemConfig) -> Result<Self> {
        cfg.validate()?;
        let resolvent = build_resolvent(&cfg)?;
        let a = cfg.alpha;
        let b = cfg.horizon_b;
        let lam_max = cfg.operator.eigenvalues().iter().cloned().fold(0.0, f64::max);
        let family = Arc::new(MlFamily::new(a, lam_max * b.powf(a) * (1.0 + 1e-9))?);
        let modes: Vec<ModeEvaluator> = cfg
            .operator
            .eigenvalues()
            .iter()
            .map(|&l| ModeEvaluator::new(l, family.clone()))
            .collect();
        let amp = modes
            .iter()
            .zip(&resolvent.diag)
            .map(|(m, o)| b.powf(a - 1.0) * m.solution_operator(b) * o)
            .collect();
        Ok(KernelEvaluator {
            cfg,
            resolvent,
            modes,
            amp,
            nonlocal_block: OnceLock::new(),
            terminal: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.cfg
    }

    pub fn resolvent(&self) -> &NonlocalResolvent {
        &self.resolvent
    }

    pub fn mode(&self, n: usize) -> &ModeEvaluator {
        &self.modes[n]
    }

    pub fn modes(&self) -> usize {
        self.modes.len()
    }

    /// `g_n(t, s)` for `0 < t ≤ b`, `0 ≤ s ≤ b` away from the singular points `s = t`, `s = t_k`.
    pub fn kernel_value(&self, mode: usize, t: f64, s: f64) -> Result<f64> {
        let b = self.cfg.horizon_b;
        if mode >= self.modes.len() {
            return Err(Error::Domain(format!("mode index {mode} out of range")));
        }
        if !(t > 0.0 && t <= b) || !(0.0..=b).contains(&s) {
            return Err(Error::Domain(format!("(t, s) = ({t}, {s}) outside (0, b] × [0, b]")));
        }
        if s == t || self.cfg.nonlocal.times.contains(&s) {
            return Err(Error::Domain(format!("kernel is singular at s = {s}")));
        }
        Ok(self.kernel_raw(mode, t, s))
    }

    /// Kernel with indicator conventions; finite at every grid node of the terminal column.
    pub(crate) fn kernel_raw(&self, n: usize, t: f64, s: f64) -> f64 {
        let m = &self.modes[n];
        let a = self.cfg.alpha;
        let mut v = 0.0;
        let lead = t.powf(a - 1.0) * m.solution_operator(t) * self.resolvent.diag[n];
        for (&c, &tk) in self.cfg.nonlocal.coefficients.iter().zip(&self.cfg.nonlocal.times) {
            if s < tk {
                v += c * lead * m.kernel(tk - s);
            }
        }
        if s < t {
            v += m.kernel(t - s);
        }
        v
    }

    /// Steering control `u(s) = Σ_m b_m g_m(b, s) q_m`.
    pub fn steering_control(&self, q: &[f64], s: f64) -> f64 {
        let b = self.cfg.horizon_b;
        self.cfg
            .control
            .b_coeffs()
            .iter()
            .zip(q)
            .enumerate()
            .map(|(m, (bm, qm))| bm * qm * self.kernel_raw(m, b, s))
            .sum()
    }

    /// `X_{nm}(τ, T) = ∫₀^{min(τ,T)} k_n(τ−s) k_m(T−s) ds`.
    pub fn cross_integral(&self, n: usize, m: usize, tau: f64, big_t: f64) -> f64 {
        if tau <= 0.0 || big_t <= 0.0 {
            return 0.0;
        }
        let a = self.cfg.alpha;
        if tau == big_t {
            let mu = 2.0 * a - 1.0;
            let (en, em) = (&self.modes[n], &self.modes[m]);
            let w_end = tau.powf(mu);
            let mut f = |w: f64| {
                let s = w.powf(1.0 / mu);
                en.solution_operator(s) * em.solution_operator(s) / mu
            };
            let mut breaks = vec![0.0];
            breaks.extend([1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.3].iter().map(|r| r * w_end));
            breaks.push(w_end);
            return integrate_breaks(&mut f, &breaks, CROSS_TOL).value;
        }
        let (p, q, lo, d) = if tau < big_t {
            (n, m, tau, big_t - tau)
        } else {
            (m, n, big_t, tau - big_t)
        };
        let (ep, eq) = (&self.modes[p], &self.modes[q]);
        let w_end = lo.powf(a);
        let lp = ep.lambda();
        let mut f = |w: f64| {
            let s = w.powf(1.0 / a);
            ep.solution_operator_pow(lp * w) * eq.kernel(d + s) / a
        };
        let da = d.powf(a);
        let mut breaks = vec![0.0];
        for r in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0] {
            let x = r * da;
            if x < w_end {
                breaks.push(x);
            }
        }
        breaks.push(w_end);
        integrate_breaks(&mut f, &breaks, CROSS_TOL).value
    }

    /// `D_{nm}(τ) = A_m Σ_l c_l X_{nm}(τ, t_l) + X_{nm}(τ, b)`.
    fn d_entry(&self, n: usize, m: usize, tau: f64) -> f64 {
        let nl = &self.cfg.nonlocal;
        let mut acc = 0.0;
        for (&c, &tl) in nl.coefficients.iter().zip(&nl.times) {
            acc += c * self.cross_integral(n, m, tau, tl);
        }
        self.amp[m] * acc + self.cross_integral(n, m, tau, self.cfg.horizon_b)
    }

    /// `Q_{nm} = Σ_k c_k D_{nm}(t_k)`, row-major.
    fn nonlocal_block(&self) -> &[f64] {
        self.nonlocal_block.get_or_init(|| {
            let nn = self.modes.len();
            let nl = &self.cfg.nonlocal;
            (0..nn * nn)
                .into_par_iter()
                .map(|idx| {
                    let (n, m) = (idx / nn, idx % nn);
                    nl.coefficients
                        .iter()
                        .zip(&nl.times)
                        .map(|(&c, &tk)| c * self.d_entry(n, m, tk))
                        .sum()
                })
                .collect()
        })
    }

    /// Unweighted `Ĉ_{nm}(τ) = ∫ g_n(τ, s) g_m(b, s) ds` for `τ > 0`.
    fn c_hat_entry(&self, n: usize, m: usize, tau: f64, e_n_tau: f64) -> f64 {
        let nn = self.modes.len();
        let a = self.cfg.alpha;
        let q = self.nonlocal_block()[n * nn + m];
        tau.powf(a - 1.0) * e_n_tau * self.resolvent.diag[n] * q + self.d_entry(n, m, tau)
    }

    /// Symmetric `∫₀ᵇ g_n(b, s) g_m(b, s) ds`, upper triangle mirrored.
    pub fn terminal_cross_gram(&self) -> &DMatrix<f64> {
        self.terminal.get_or_init(|| {
            let nn = self.modes.len();
            let b = self.cfg.horizon_b;
            let pairs: Vec<(usize, usize)> =
                (0..nn).flat_map(|n| (n..nn).map(move |m| (n, m))).collect();
            let vals: Vec<f64> = pairs
                .par_iter()
                .map(|&(n, m)| self.c_hat_entry(n, m, b, self.modes[n].solution_operator(b)))
                .collect();
            let mut c = DMatrix::zeros(nn, nn);
            for (&(n, m), v) in pairs.iter().zip(vals) {
                c[(n, m)] = v;
                c[(m, n)] = v;
            }
            c
        })
    }

    /// Prepares product weights and cross integrals for a grid on `[0, b]`.
    pub fn discretize(self: &Arc<Self>, grid: TimeGrid) -> Result<MildDiscretization> {
        MildDiscretization::new(self.clone(), grid)
    }
}

/// Trajectory stored as weighted modal values `t^{1−α} x_n(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub weighted_modes: Vec<Vec<f64>>,
    pub alpha: f64,
}

impl Trajectory {
    pub fn zeros(grid: TimeGrid, modes: usize, alpha: f64) -> Self {
        let len = grid.len();
        Trajectory {
            grid,
            weighted_modes: vec![vec![0.0; len]; modes],
            alpha,
        }
    }

    pub fn modes(&self) -> usize {
        self.weighted_modes.len()
    }

    pub fn weighted_at(&self, i: usize) -> Vec<f64> {
        self.weighted_modes.iter().map(|w| w[i]).collect()
    }

    /// `x(t_i)`; requires `t_i > 0` unless the weight exponent is 1.
    pub fn state_at(&self, i: usize) -> Vec<f64> {
        let t = self.grid.nodes()[i];
        let s = if self.alpha == 1.0 { 1.0 } else { t.powf(self.alpha - 1.0) };
        self.weighted_modes.iter().map(|w| s * w[i]).collect()
    }

    pub fn terminal_state(&self) -> Vec<f64> {
        self.state_at(self.grid.len() - 1)
    }

    /// `sup_t t^{1−α} ‖x(t)‖` over the grid.
    pub fn norm(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.weighted_modes.iter().map(|w| w[i] * w[i]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Trajectory) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                self.weighted_modes
                    .iter()
                    .zip(&other.weighted_modes)
                    .map(|(a, b)| (a[i] - b[i]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `self + s (other − self)`.
    pub fn blend(&self, other: &Trajectory, s: f64) -> Trajectory {
        let mut out = self.clone();
        for (w, o) in out.weighted_modes.iter_mut().zip(&other.weighted_modes) {
            for (a, b) in w.iter_mut().zip(o) {
                *a += s * (b - *a);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.weighted_modes.iter().flatten().all(|v| v.is_finite())
    }
}

/// Product-integration weights of one mode kernel on one grid.
#[derive(Debug, Clone)]
struct ConvolutionWeights {
    /// First index of the equally spaced tail of the grid.
    head_end: usize,
    /// Per output node: weights on nodes `0..=min(i, head_end)` for cells below `head_end`.
    head: Vec<Vec<f64>>,
    lag_lo: Vec<f64>,
    lag_hi: Vec<f64>,
}

fn cell_weights(m: &ModeEvaluator, sa: f64, sb: f64) -> (f64, f64) {
    let i0 = m.kernel_integral(sb) - m.kernel_integral(sa);
    let g = |s: f64| s * m.kernel_integral(s) - m.kernel_double_integral(s);
    let j1 = sb * i0 - (g(sb) - g(sa));
    let hi = j1 / (sb - sa);
    (i0 - hi, hi)
}

impl ConvolutionWeights {
    fn new(m: &ModeEvaluator, t: &[f64]) -> Self {
        let n = t.len();
        let step = t[n - 1] - t[n - 2];
        let mut p = n - 2;
        while p > 0 && ((t[p] - t[p - 1]) - step).abs() <= 1e-9 * step {
            p -= 1;
        }
        let head = (0..n)
            .map(|i| {
                let cells = i.min(p);
                let mut w = vec![0.0; cells + 1];
                for j in 0..cells {
                    let (lo, hi) = cell_weights(m, t[i] - t[j + 1], t[i] - t[j]);
                    w[j] += lo;
                    w[j + 1] += hi;
                }
                w
            })
            .collect();
        let lags = n - 1 - p;
        let mut lag_lo = vec![0.0; lags + 1];
        let mut lag_hi = vec![0.0; lags + 1];
        for d in 1..=lags {
            let (lo, hi) = cell_weights(m, (d - 1) as f64 * step, d as f64 * step);
            lag_lo[d] = lo;
            lag_hi[d] = hi;
        }
        ConvolutionWeights {
            head_end: p,
            head,
            lag_lo,
            lag_hi,
        }
    }

    /// `∫₀^{t_i} k(t_i − s) h(s) ds` for piecewise-linear `h`.
    fn apply(&self, h: &[f64], i: usize) -> f64 {
        let head = &self.head[i];
        let mut acc: f64 = head.iter().zip(h).map(|(a, b)| a * b).sum();
        let p = self.head_end;
        for j in p..i {
            let d = i - j;
            acc += self.lag_lo[d] * h[j] + self.lag_hi[d] * h[j + 1];
        }
        acc
    }
}

/// Control term of the mild-solution formula.
#[derive(Debug, Clone, Copy)]
pub enum ControlInput<'a> {
    None,
    /// Plain samples `u(t_i)` on the discretization grid.
    Samples(&'a WeightedSamples),
    /// `u(s) = Σ_m b_m g_m(b, s) q_m`.
    Steering(&'a [f64]),
}

/// Grid-specific data for repeated mild-solution evaluations.
#[derive(Debug)]
pub struct MildDiscretization {
    kernel: Arc<KernelEvaluator>,
    grid: TimeGrid,
    nonlocal_idx: Vec<usize>,
    weights: Vec<ConvolutionWeights>,
    /// `E_n(t_i)`, mode-major.
    solution_values: Vec<Vec<f64>>,
    steering: OnceLock<Vec<f64>>,
}

impl MildDiscretization {
    pub fn new(kernel: Arc<KernelEvaluator>, grid: TimeGrid) -> Result<Self> {
        let cfg = kernel.config();
        let b = cfg.horizon_b;
        if (grid.horizon() - b).abs() > 1e-12 * b {
            return Err(Error::Contract(format!(
                "grid ends at {} but the horizon is b = {b}",
                grid.horizon()
            )));
        }
        let mut nonlocal_idx = Vec::new();
        for (k, &tk) in cfg.nonlocal.times.iter().enumerate() {
            match grid.find_node(tk, 1e-12) {
                Some(i) => nonlocal_idx.push(i),
                None => {
                    return Err(Error::validation(
                        format!("problem.nonlocal.times[{k}]"),
                        format!("t_k = {tk} is not a grid node (within 1e-12); choose grid_size accordingly"),
                    ))
                }
            }
        }
        let t = grid.nodes();
        if nonlocal_idx.iter().zip(&cfg.nonlocal.times).any(|(&i, &tk)| t[i] != tk) {
            return Err(Error::Contract("collocation times must coincide with grid nodes exactly".into()));
        }
        let weights = (0..kernel.modes())
            .into_par_iter()
            .map(|n| ConvolutionWeights::new(kernel.mode(n), t))
            .collect();
        let solution_values = (0..kernel.modes())
            .map(|n| t.iter().map(|&s| kernel.mode(n).solution_operator(s)).collect())
            .collect();
        Ok(MildDiscretization {
            kernel,
            grid,
            nonlocal_idx,
            weights,
            solution_values,
            steering: OnceLock::new(),
        })
    }

    pub fn kernel(&self) -> &Arc<KernelEvaluator> {
        &self.kernel
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Weighted steering responses `t^{1−α} ∫ g_n(t, s) g_m(b, s) ds`, layout `[i][n][m]`.
    fn steering_block(&self) -> &[f64] {
        self.steering.get_or_init(|| {
            let k = &self.kernel;
            let nn = k.modes();
            let a = k.config().alpha;
            let t = self.grid.nodes();
            let last = t.len() - 1;
            let terminal = k.terminal_cross_gram();
            let q = k.nonlocal_block();
            let ga = gamma(a);
            let rows: Vec<Vec<f64>> = (0..t.len())
                .into_par_iter()
                .map(|i| {
                    let mut row = vec![0.0; nn * nn];
                    for n in 0..nn {
                        for m in 0..nn {
                            row[n * nn + m] = if i == 0 {
                                k.resolvent.diag[n] * q[n * nn + m] / ga
                            } else if i == last {
                                t[i].powf(1.0 - a) * terminal[(n, m)]
                            } else {
                                let e = self.solution_values[n][i];
                                e * k.resolvent.diag[n] * q[n * nn + m]
                                    + t[i].powf(1.0 - a) * k.d_entry(n, m, t[i])
                            };
                        }
                    }
                    row
                })
                .collect();
            rows.concat()
        })
    }

    /// Forces the cross integrals needed by steering controls.
    pub fn prepare_steering(&self) {
        let _ = self.steering_block();
    }

    /// Mild solution for control `u` and forcing samples `f` (plain values on the grid).
    pub fn evaluate(&self, control: ControlInput<'_>, forcing: Option<&Trajectory>) -> Result<Trajectory> {
        let k = &self.kernel;
        let cfg = k.config();
        let nn = k.modes();
        let a = cfg.alpha;
        let t = self.grid.nodes();
        let len = t.len();
        if let Some(f) = forcing {
            if f.grid != self.grid || f.modes() != nn {
                return Err(Error::Contract("forcing samples do not match the grid or mode count".into()));
            }
            if f.alpha != 1.0 {
                return Err(Error::Contract("forcing must be given as plain samples".into()));
            }
        }
        let u = match control {
            ControlInput::Samples(s) => {
                if s.grid != self.grid {
                    return Err(Error::Contract("control samples are not on the solver grid".into()));
                }
                if s.alpha != 1.0 {
                    return Err(Error::Contract("control must be given as plain samples".into()));
                }
                Some(&s.weighted_values)
            }
            _ => None,
        };
        let ga = gamma(a);
        let bcoef = cfg.control.b_coeffs();
        let mut out: Vec<Vec<f64>> = (0..nn)
            .into_par_iter()
            .map(|n| {
                let mut w = vec![0.0; len];
                let mut h = vec![0.0; len];
                let mut active = false;
                if let Some(u) = u {
                    active = true;
                    for (hi, ui) in h.iter_mut().zip(u) {
                        *hi += bcoef[n] * ui;
                    }
                }
                if let Some(f) = forcing {
                    active = true;
                    for (hi, fi) in h.iter_mut().zip(&f.weighted_modes[n]) {
                        *hi += fi;
                    }
                }
                if !active {
                    return w;
                }
                let y: Vec<f64> = (0..len).map(|i| self.weights[n].apply(&h, i)).collect();
                let init: f64 = cfg
                    .nonlocal
                    .coefficients
                    .iter()
                    .zip(&self.nonlocal_idx)
                    .map(|(c, &i)| c * y[i])
                    .sum::<f64>()
                    * k.resolvent.diag[n];
                w[0] = init / ga;
                for i in 1..len {
                    w[i] = self.solution_values[n][i] * init + t[i].powf(1.0 - a) * y[i];
                }
                w
            })
            .collect();
        if let ControlInput::Steering(q) = control {
            if q.len() != nn {
                return Err(Error::Contract(format!("{} steering coefficients for {nn} modes", q.len())));
            }
            let blk = self.steering_block();
            for (n, w) in out.iter_mut().enumerate() {
                for (i, wi) in w.iter_mut().enumerate() {
                    let row = &blk[(i * nn + n) * nn..(i * nn + n + 1) * nn];
                    let s: f64 = row
                        .iter()
                        .zip(bcoef)
                        .zip(q)
                        .map(|((c, bm), qm)| c * bm * qm)
                        .sum();
                    *wi += bcoef[n] * s;
                }
            }
        }
        let traj = Trajectory {
            grid: self.grid.clone(),
            weighted_modes: out,
            alpha: a,
        };
        if !traj.is_finite() {
            return Err(Error::Numeric("mild solution produced non-finite values".into()));
        }
        Ok(traj)
    }

    /// Samples of the steering control on the grid (indicator conventions at singular nodes).
    pub fn steering_samples(&self, q: &[f64]) -> Result<WeightedSamples> {
        let vals = self
            .grid
            .nodes()
            .iter()
            .map(|&s| self.kernel.steering_control(q, s))
            .collect();
        WeightedSamples::new(self.grid.clone(), vals, 1.0)
    }
}

/// Evaluates `x(t) = ∫₀ᵇ G(t, s)[Bu(s) + f(s)] ds` on the discretization grid.
pub fn evaluate_mild_solution(
    disc: &MildDiscretization,
    control: ControlInput<'_>,
    forcing: Option<&Trajectory>,
) -> Result<Trajectory> {
    disc.evaluate(control, forcing)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialFunctional {
    /// `Γ(α) lim_{t→0} t^{1−α} x(t)` by extrapolation.
    pub extrapolated: Vec<f64>,
    /// `Σ_k c_k x(t_k)`.
    pub collocated: Vec<f64>,
}

impl InitialFunctional {
    pub fn mismatch(&self) -> f64 {
        self.extrapolated
            .iter()
            .zip(&self.collocated)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Recovers both sides of the nonlocal initial condition from a trajectory.
pub fn reconstruct_initial_functional(x: &Trajectory, cfg: &ProblemConfig) -> Result<InitialFunctional> {
    let a = cfg.alpha;
    let t = x.grid.nodes();
    if t.len() < 5 {
        return Err(Error::Resolution(format!(
            "extrapolation needs four positive nodes, grid has {}",
            t.len() - 1
        )));
    }
    let exps: [f64; 4] = if a == 1.0 {
        [0.0, 1.0, 2.0, 3.0]
    } else {
        [0.0, a, 1.0, 2.0 * a]
    };
    let scale = t[4];
    let mat = DMatrix::from_fn(4, 4, |r, c| (t[r + 1] / scale).powf(exps[c]));
    let lu = mat.lu();
    let mut extrapolated = Vec::with_capacity(x.modes());
    for w in &x.weighted_modes {
        let rhs = DVector::from_iterator(4, (1..=4).map(|i| w[i]));
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numeric("singular extrapolation system".into()))?;
        extrapolated.push(gamma(a) * sol[0]);
    }
    let mut collocated = vec![0.0; x.modes()];
    for (&c, &tk) in cfg.nonlocal.coefficients.iter().zip(&cfg.nonlocal.times) {
        let i = x.grid.find_node(tk, 1e-12).ok_or_else(|| {
            Error::Contract(format!("collocation time {tk} is not a grid node"))
        })?;
        for (acc, w) in collocated.iter_mut().zip(&x.weighted_modes) {
            *acc += c * tk.powf(a - 1.0) * w[i];
        }
    }
    Ok(InitialFunctional {
        extrapolated,
        collocated,
    })
}
