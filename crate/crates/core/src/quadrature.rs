//! Numerical integration: adaptive Gauss–Kronrod and Gauss–Jacobi rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 4000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-14, 1e-12)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive 15-point Gauss–Kronrod integration over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Integral {
    integrate_breaks(&mut f, &[a, b], tol)
}

/// Adaptive integration with user supplied breakpoints (sorted ascending).
pub fn integrate_breaks<F: FnMut(f64) -> f64>(f: &mut F, breaks: &[f64], tol: Tolerance) -> Integral {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let mut count = heap.len();
    while err > tol.abs.max(tol.rel * total.abs()) {
        if count >= tol.max_intervals {
            break;
        }
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
        count += 1;
    }
    // Re-sum to shed accumulated cancellation from incremental updates.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    Integral {
        value,
        error,
        converged: error <= tol.abs.max(tol.rel * value.abs()),
    }
}

/// Gauss rule on `[-1, 1]` for the weight `(1-x)^a (1+x)^b`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn legendre(n: usize) -> Self {
        Self::jacobi(n, 0.0, 0.0)
    }

    /// Golub–Welsch construction; `a, b > -1`.
    pub fn jacobi(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1 && a > -1.0 && b > -1.0);
        let ab = a + b;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for (k, d) in diag.iter_mut().enumerate() {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            *d = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            };
        }
        for (k, o) in off.iter_mut().enumerate() {
            let kf = (k + 1) as f64;
            let s = 2.0 * kf + ab;
            *o = if k == 0 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                (4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            };
        }
        let jac = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jac);
        let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(ab + 2.0))
        .exp();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        GaussRule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Integrates `f` against the rule's weight mapped affinely onto `[lo, hi]`.
    /// The weight factor is not rescaled: callers account for `((hi-lo)/2)^(a+b+1)`.
    pub fn apply<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_polynomial_exact() {
        let r = integrate(|x| x.powi(6) - 3.0 * x, 0.0, 2.0, Tolerance::default());
        assert!((r.value - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let r = integrate(|x| x.sqrt(), 0.0, 1.0, Tolerance::new(1e-14, 1e-13));
        assert!(r.converged);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        let g = GaussRule::legendre(12);
        let s: f64 = g.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let v = g.apply(-1.0, 1.0, |x| x.powi(22));
        assert!((v - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_integrates_singular_weight() {
        // ∫_{-1}^{1} (1+x)^{-1/4} x^2 dx
        let g = GaussRule::jacobi(10, 0.0, -0.25);
        let v = g.apply(-1.0, 1.0, |x| x * x);
        let exact = {
            // substitute y = 1+x on [0,2]: ∫ y^{-1/4}(y-1)^2 dy
            let p = |e: f64| 2f64.powf(e) / e;
            p(2.75) - 2.0 * p(1.75) + p(0.75)
        };
        assert!((v - exact).abs() < 1e-13);
    }
}
