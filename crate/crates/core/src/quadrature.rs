//! Gauss–Legendre rules on `[-1, 1]` and composite integration over break lists.

use crate::error::{config_err, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the Chebyshev guesses.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(config_err("Gauss rule order must be positive"));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of the rule over consecutive cells `[breaks[k], breaks[k+1]]`.
    /// `f` returns two integrands at once.
    pub fn integrate_pieces2<F>(&self, breaks: &[f64], mut f: F) -> (f64, f64)
    where
        F: FnMut(f64) -> (f64, f64),
    {
        let (mut s0, mut s1) = (0.0, 0.0);
        for cell in breaks.windows(2) {
            let (a, b) = (cell[0], cell[1]);
            if b <= a {
                continue;
            }
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let (mut c0, mut c1) = (0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let (v0, v1) = f(mid + half * x);
                c0 += w * v0;
                c1 += w * v1;
            }
            s0 += half * c0;
            s1 += half * c1;
        }
        (s0, s1)
    }

    pub fn integrate_pieces<F>(&self, breaks: &[f64], mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        self.integrate_pieces2(breaks, |x| (f(x), 0.0)).0
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// `n + 1` equally spaced points on `[a, b]` followed by `extra` points inside
/// `(a, b)`, sorted.
pub fn break_list(a: f64, b: f64, n: usize, extra: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    v[n] = b;
    v.extend(extra.iter().copied().filter(|x| *x > a && *x < b));
    v.sort_by(|x, y| x.total_cmp(y));
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_exact_for_high_degree() {
        for n in [1, 2, 4, 8, 12] {
            let g = GaussRule::new(n).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "{n}: {s}");
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            let q = g.integrate_pieces(&[-1.0, 1.0], |x| x.powi(deg as i32) + x.powi(deg as i32 - 1));
            let exact2 = exact + if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - exact2).abs() < 1e-13, "{n}: {q} vs {exact2}");
        }
    }

    #[test]
    fn eight_point_nodes() {
        let g = GaussRule::new(8).unwrap();
        assert!((g.nodes()[7] - 0.960_289_856_497_536_3).abs() < 1e-15);
        assert!((g.weights()[7] - 0.101_228_536_290_376_26).abs() < 1e-15);
    }

    #[test]
    fn break_list_is_sorted_and_clipped() {
        let b = break_list(-1.0, 1.0, 2, &[0.5, 1.5, -2.0, 0.0]);
        assert_eq!(b, vec![-1.0, 0.0, 0.5, 1.0]);
    }
}
