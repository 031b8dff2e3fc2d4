//! Adaptive Gauss-Legendre quadrature in one and two dimensions.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-type initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Fixed-order rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const ORDER: usize = 15;
const MAX_DEPTH: u32 = 40;

/// Adaptive integration by interval bisection: a panel is accepted when the
/// fixed-order estimate agrees with the sum over its two halves.
#[derive(Debug, Clone)]
pub struct Adaptive {
    rule: GaussLegendre,
    tol: f64,
}

impl Adaptive {
    pub fn new(tol: f64) -> Self {
        Adaptive {
            rule: GaussLegendre::new(ORDER),
            tol,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let whole = self.rule.integrate(a, b, &mut f);
        self.refine(a, b, whole, self.tol, 0, &mut f)
    }

    fn refine<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &mut F) -> f64 {
        let m = 0.5 * (a + b);
        let left = self.rule.integrate(a, m, &mut *f);
        let right = self.rule.integrate(m, b, &mut *f);
        let split = left + right;
        if (split - whole).abs() <= tol || depth >= MAX_DEPTH {
            return split;
        }
        self.refine(a, m, left, 0.5 * tol, depth + 1, f) + self.refine(m, b, right, 0.5 * tol, depth + 1, f)
    }

    /// `int_{x0}^{x1} int_{y0}^{y1} f(x, y) dy dx` as nested 1-D integrals.
    pub fn integrate_2d<F: Fn(f64, f64) -> f64>(&self, (x0, x1): (f64, f64), (y0, y1): (f64, f64), f: F) -> f64 {
        let inner = Adaptive::new(self.tol / (x1 - x0).abs().max(1.0));
        self.integrate(x0, x1, |x| inner.integrate(y0, y1, |y| f(x, y)))
    }
}
