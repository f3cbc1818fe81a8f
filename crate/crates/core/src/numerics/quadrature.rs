//! Composite Simpson rules on non-uniform meshes and Gauss–Legendre panels.

use crate::error::Result;
/// Mesh on `[0, 1]` with `n` points graded toward the origin:
/// `r_i = (i / (n - 1))^power`.
pub fn graded_mesh(n: usize, power: f64) -> Vec<f64> {
    assert!(n >= 3, "graded mesh needs at least 3 points");
    let last = (n - 1) as f64;
    (0..n).map(|i| (i as f64 / last).powf(power)).collect()
}

/// Integral over `[x0, x1]` of the parabola through three points.
fn quad_first(h0: f64, h1: f64, y: [f64; 3]) -> f64 {
    let big = h0 + h1;
    let w0 = h0 * (3.0 * big - h0) / (6.0 * big);
    let w1 = h0 * (3.0 * big - 2.0 * h0) / (6.0 * h1);
    let w2 = -h0 * h0 * h0 / (6.0 * big * h1);
    w0 * y[0] + w1 * y[1] + w2 * y[2]
}

/// Integral over `[x0, x2]` of the parabola through three points.
fn quad_pair(h0: f64, h1: f64, y: [f64; 3]) -> f64 {
    let big = h0 + h1;
    big / 6.0 * ((2.0 - h1 / h0) * y[0] + big * big / (h0 * h1) * y[1] + (2.0 - h0 / h1) * y[2])
}

/// Running integral `∫_{x_0}^{x_i} y` at every node, composite Simpson on
/// consecutive node pairs. Odd nodes use the left half of the local parabola
/// and a trailing odd interval uses the right half of the last parabola.
pub fn cumulative_simpson(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
        return out;
    }
    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let ys = [y[i], y[i + 1], y[i + 2]];
        out[i + 1] = out[i] + quad_first(h0, h1, ys);
        out[i + 2] = out[i] + quad_pair(h0, h1, ys);
        i += 2;
    }
    if i + 1 < n {
        // one interval left: right half of the parabola through the last three nodes
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let ys = [y[i - 1], y[i], y[i + 1]];
        out[i + 1] = out[i] + quad_pair(h0, h1, ys) - quad_first(h0, h1, ys);
    }
    out
}

/// Composite Simpson integral over the whole mesh.
pub fn simpson(x: &[f64], y: &[f64]) -> f64 {
    *cumulative_simpson(x, y).last().unwrap_or(&0.0)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed Gauss–Legendre rule applied on equal panels of `[a, b]`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl PanelRule {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        PanelRule {
            nodes,
            weights,
            panels: panels.max(1),
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let out: Result<f64> = self.try_integrate(a, b, |x| Ok(f(x)));
        out.unwrap_or(f64::NAN)
    }

    /// As [`PanelRule::integrate`] for a fallible integrand; the first error
    /// stops the sum.
    pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let width = (b - a) / self.panels as f64;
        let mut total = 0.0;
        for k in 0..self.panels {
            let lo = a + k as f64 * width;
            let half = 0.5 * width;
            let mid = lo + half;
            let mut acc = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += w * f(mid + half * x)?;
            }
            total += half * acc;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_simpson_exact_for_cubics_on_pairs() {
        let x = graded_mesh(33, 1.5);
        let y: Vec<f64> = x.iter().map(|t| 1.0 + t * t).collect();
        let c = cumulative_simpson(&x, &y);
        for (xi, ci) in x.iter().zip(&c) {
            let exact = xi + xi.powi(3) / 3.0;
            assert!((ci - exact).abs() < 1e-14, "{xi}: {ci} vs {exact}");
        }
    }

    #[test]
    fn odd_tail_is_handled() {
        let x: Vec<f64> = (0..6).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = x.iter().map(|t| t * t).collect();
        assert!((simpson(&x, &y) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn panel_rule_on_exponential() {
        let rule = PanelRule::new(10, 4);
        let v = rule.integrate(0.0, 2.0, f64::exp);
        assert!((v - (2f64.exp() - 1.0)).abs() < 1e-13);
    }
}
