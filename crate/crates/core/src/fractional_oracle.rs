//! Brute-force Riemann–Liouville operators on weighted samples and a
//! product-integration stepper for scalar fractional ODEs.
//!
//! Everything here works directly from power-kernel moments computed by
//! Gauss–Jacobi quadrature; nothing is shared with the spectral solver, so the
//! two can be used to check one another.

use statrs::function::beta::beta as beta_fn;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::grid::{TimeGrid, WeightedSamples};
use crate::quadrature::GaussRule;

const POINTS: usize = 16;

/// Quadrature rules for `∫ (t−s)^{μ−1} s^{β−1} ψ(s) ds` over one cell.
struct CellRules {
    mu: f64,
    beta: f64,
    plain: GaussRule,
    at_origin: GaussRule,
    at_target: GaussRule,
}

impl CellRules {
    fn new(mu: f64, beta: f64) -> Self {
        CellRules {
            mu,
            beta,
            plain: GaussRule::legendre(POINTS),
            at_origin: GaussRule::jacobi(POINTS, 0.0, beta - 1.0),
            at_target: GaussRule::jacobi(POINTS, mu - 1.0, 0.0),
        }
    }

    /// Moments against the two hat functions of the cell `[lo, hi]` for target `t ≥ hi`.
    fn moments(&self, t: f64, lo: f64, hi: f64) -> (f64, f64) {
        let (mu, beta) = (self.mu, self.beta);
        let width = hi - lo;
        let hat_hi = |s: f64| (s - lo) / width;
        if lo == 0.0 && hi == t {
            let total = t.powf(beta + mu - 1.0) * beta_fn(beta, mu);
            let upper = t.powf(beta + mu - 1.0) * beta_fn(beta + 1.0, mu);
            return (total - upper, upper);
        }
        let mut acc = (0.0, 0.0);
        let mut add = |w: f64, s: f64| {
            let p = hat_hi(s);
            acc.0 += w * (1.0 - p);
            acc.1 += w * p;
        };
        let c = 0.5 * (lo + hi);
        let h = 0.5 * width;
        if lo == 0.0 {
            let scale = h.powf(beta);
            for (&x, &w) in self.at_origin.nodes.iter().zip(&self.at_origin.weights) {
                let s = c + h * x;
                add(scale * w * (t - s).powf(mu - 1.0), s);
            }
        } else if hi == t {
            let scale = h.powf(mu);
            for (&x, &w) in self.at_target.nodes.iter().zip(&self.at_target.weights) {
                let s = c + h * x;
                add(scale * w * s.powf(beta - 1.0), s);
            }
        } else {
            for (&x, &w) in self.plain.nodes.iter().zip(&self.plain.weights) {
                let s = c + h * x;
                add(h * w * (t - s).powf(mu - 1.0) * s.powf(beta - 1.0), s);
            }
        }
        acc
    }

    /// Node weights `W_j` with `∫₀^{t_i} (t_i−s)^{μ−1} s^{β−1} w(s) ds ≈ Σ_{j≤i} W_j w_j`.
    fn node_weights(&self, nodes: &[f64], i: usize, out: &mut Vec<f64>) {
        out.clear();
        out.resize(i + 1, 0.0);
        let t = nodes[i];
        for j in 0..i {
            let (a, b) = self.moments(t, nodes[j], nodes[j + 1]);
            out[j] += a;
            out[j + 1] += b;
        }
    }
}

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("order = {order} outside (0, 1)")))
    }
}

/// Riemann–Liouville integral `I^order x` on the sample grid.
///
/// The result carries weight exponent `alpha + order`.
pub fn rl_integral(samples: &WeightedSamples, order: f64) -> Result<WeightedSamples> {
    check_order(order)?;
    let beta = samples.alpha;
    if !(beta > 0.0) {
        return Err(Error::Domain(format!(
            "weight exponent {beta} is not integrable at the origin"
        )));
    }
    let nodes = samples.grid.nodes();
    let w = &samples.weighted_values;
    let rules = CellRules::new(order, beta);
    let scale = 1.0 / gamma(order);
    let out_exp = beta + order;
    let mut out = Vec::with_capacity(nodes.len());
    out.push(w[0] * gamma(beta) / gamma(out_exp));
    let mut weights = Vec::new();
    for i in 1..nodes.len() {
        rules.node_weights(nodes, i, &mut weights);
        let v: f64 = weights.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() * scale;
        out.push(nodes[i].powf(1.0 - out_exp) * v);
    }
    WeightedSamples::new(samples.grid.clone(), out, out_exp)
}

/// Riemann–Liouville derivative `(d/dt) I^{1−order} x`, the `0 < order < 1` branch.
///
/// The result carries weight exponent `alpha − order` (possibly ≤ 0).
pub fn rl_derivative(samples: &WeightedSamples, order: f64) -> Result<WeightedSamples> {
    check_order(order)?;
    let v = rl_integral(samples, 1.0 - order)?;
    let g = v.alpha;
    let t = samples.grid.nodes();
    let om = &v.weighted_values;
    let n = t.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let slope = if n == 2 {
            (om[1] - om[0]) / (t[1] - t[0])
        } else if i == 0 {
            0.0
        } else if i + 1 < n {
            let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            -h2 / (h1 * (h1 + h2)) * om[i - 1] + (h2 - h1) / (h1 * h2) * om[i]
                + h1 / (h2 * (h1 + h2)) * om[i + 1]
        } else {
            let (h1, h2) = (t[i - 1] - t[i - 2], t[i] - t[i - 1]);
            h2 / (h1 * (h1 + h2)) * om[i - 2] - (h1 + h2) / (h1 * h2) * om[i - 1]
                + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * om[i]
        };
        out[i] = (g - 1.0) * om[i] + t[i] * slope;
    }
    WeightedSamples::new(samples.grid.clone(), out, g - 1.0)
}

/// Solves `D^α x = −λ x + g(t)`, `I^{1−α} x|₀ = init_weight` on a uniform grid.
///
/// Implicit product integration of the equivalent Volterra equation in the
/// weighted unknown `w = t^{1−α} x`. For `α = 1` this is the trapezoidal rule.
pub fn step_scalar_fode(
    alpha: f64,
    lambda: f64,
    forcing: &dyn Fn(f64) -> f64,
    init_weight: f64,
    grid: &TimeGrid,
) -> Result<WeightedSamples> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (1/2, 1]")));
    }
    if !grid.is_uniform() {
        return Err(Error::Contract("the stepper requires a uniform grid".into()));
    }
    let t = grid.nodes();
    let g: Vec<f64> = t.iter().map(|&s| forcing(s)).collect();
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite forcing sample at t = {}", t[i])));
    }
    let ga = gamma(alpha);
    let state_rules = CellRules::new(alpha, alpha);
    let force_rules = CellRules::new(alpha, 1.0);
    let mut w = vec![0.0; t.len()];
    w[0] = init_weight / ga;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for i in 1..t.len() {
        state_rules.node_weights(t, i, &mut a);
        force_rules.node_weights(t, i, &mut b);
        let history: f64 = a[..i].iter().zip(&w[..i]).map(|(x, y)| x * y).sum();
        let forced: f64 = b.iter().zip(&g).map(|(x, y)| x * y).sum();
        let tp = t[i].powf(alpha - 1.0);
        let rhs = init_weight * tp / ga + (forced - lambda * history) / ga;
        w[i] = rhs / (tp + lambda * a[i] / ga);
    }
    WeightedSamples::new(grid.clone(), w, alpha)
}
