//! Composite Gauss–Legendre quadrature.

use crate::scalar::Scalar;

pub const GAUSS_ORDER: usize = 16;
pub const MAX_PANEL_WIDTH: f64 = 0.05;

/// Gauss–Legendre nodes and weights on [−1, 1] via Newton iteration on P_n.
pub fn gauss_legendre<T: Scalar>(order: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![0.0f64; order];
    let mut weights = vec![0.0f64; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (
        nodes.into_iter().map(T::c).collect(),
        weights.into_iter().map(T::c).collect(),
    )
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature nodes over a union of panels. Panels never straddle a
/// breakpoint, so piecewise-smooth integrands are integrated panel by panel.
#[derive(Clone, Debug)]
pub struct QuadratureGrid<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    /// Panel boundaries, ascending.
    pub edges: Vec<T>,
}

impl<T: Scalar> QuadratureGrid<T> {
    /// Composite rule over [a, b] with the given breakpoints honoured and
    /// every panel no wider than `max_width`.
    pub fn composite(a: T, b: T, breakpoints: &[T], max_width: T, order: usize) -> Self {
        let mut cuts: Vec<T> = breakpoints
            .iter()
            .copied()
            .filter(|&x| x > a && x < b)
            .collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup();

        let mut edges = vec![cuts[0]];
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let pieces = ((hi - lo) / max_width).ceil().to_usize().unwrap_or(1).max(1);
            let step = (hi - lo) / T::from_usize_lossy(pieces);
            for p in 1..pieces {
                edges.push(lo + step * T::from_usize_lossy(p));
            }
            edges.push(hi);
        }

        let (gx, gw) = gauss_legendre::<T>(order);
        let mut nodes = Vec::with_capacity(edges.len() * order);
        let mut weights = Vec::with_capacity(edges.len() * order);
        let half = T::c(0.5);
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let mid = half * (lo + hi);
            let rad = half * (hi - lo);
            for (&x, &wt) in gx.iter().zip(&gw) {
                nodes.push(mid + rad * x);
                weights.push(rad * wt);
            }
        }
        Self { nodes, weights, edges }
    }

    /// Default grid on [a, b]: order 16, panel width ≤ 0.05.
    pub fn standard(a: T, b: T, breakpoints: &[T]) -> Self {
        Self::composite(a, b, breakpoints, T::c(MAX_PANEL_WIDTH), GAUSS_ORDER)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
