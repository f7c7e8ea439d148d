//! Independent averaging over the Gaussian phase-noise model.
//!
//! Every noise-averaged closed form in [`crate::hom`] and [`crate::noon`] is
//! checked against a tensor-product Gauss-Hermite average of the
//! corresponding noiseless expression. Nothing here knows about the closed
//! forms.

use crate::error::{Error, Result};
use crate::types::{NoiseParams, NoiseRealization};

pub const DEFAULT_ORDER: usize = 64;
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 200;

/// Gauss-Hermite rule for the weight `exp(-x^2)` (physicists' convention).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `int exp(-x^2) f(x) dx` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with zero diagonal and
/// off-diagonal `e` (implicit QL with Wilkinson shifts), unsorted.
fn tridiagonal_eigenvalues(mut e: Vec<f64>) -> Vec<f64> {
    let n = e.len() + 1;
    let mut d = vec![0.0f64; n];
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Orthonormal Hermite value `p_n(z)` and `p_{n-1}(z)`.
fn hermite_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = std::f64::consts::PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Nodes (descending) and weights: Jacobi-matrix eigenvalues as starting
/// points, polished by Newton on the orthonormal recurrence.
pub fn gauss_hermite_rule(order: usize) -> Result<GaussHermiteRule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange(order));
    }
    let n = order;
    let scale = (2.0 * n as f64).sqrt();
    let mut guesses = tridiagonal_eigenvalues((1..n).map(|k| (k as f64 / 2.0).sqrt()).collect());
    guesses.sort_by(|a, b| b.total_cmp(a));
    let half = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..half {
        let mut z = guesses[i];
        let mut pp = 0.0;
        for _ in 0..10 {
            let (p1, p2) = hermite_pair(n, z);
            pp = scale * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        if 2 * i + 1 == n {
            // The middle root is exactly zero.
            z = 0.0;
            pp = scale * hermite_pair(n, 0.0).1;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    Ok(GaussHermiteRule { nodes, weights })
}

/// Averages functions of `(eps, theta)` over independent zero-mean Gaussians
/// with standard deviations `eta_eps` and `eta_theta`.
#[derive(Debug, Clone)]
pub struct NoiseAverager {
    eps_axis: Vec<(f64, f64)>,
    theta_axis: Vec<(f64, f64)>,
}

impl NoiseAverager {
    pub fn new(noise: &NoiseParams, order: usize) -> Result<Self> {
        let rule = gauss_hermite_rule(order)?;
        let norm = std::f64::consts::PI.sqrt();
        // Change of variables x -> sqrt(2) eta x turns the Gaussian into exp(-x^2) / sqrt(pi).
        let axis = |eta: f64| -> Vec<(f64, f64)> {
            if eta == 0.0 {
                vec![(0.0, 1.0)]
            } else {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| (std::f64::consts::SQRT_2 * eta * x, w / norm))
                    .collect()
            }
        };
        Ok(Self {
            eps_axis: axis(noise.eta_eps),
            theta_axis: axis(noise.eta_theta),
        })
    }

    /// Number of function evaluations per average.
    pub fn nodes(&self) -> usize {
        self.eps_axis.len() * self.theta_axis.len()
    }

    pub fn average<F: Fn(NoiseRealization) -> f64>(&self, f: F) -> Result<f64> {
        let [v] = self.average_n(|r| [f(r)])?;
        Ok(v)
    }

    /// Component-wise average of a vector-valued function.
    pub fn average_n<const N: usize, F: Fn(NoiseRealization) -> [f64; N]>(&self, f: F) -> Result<[f64; N]> {
        let mut acc = [0.0; N];
        for &(eps, we) in &self.eps_axis {
            for &(theta, wt) in &self.theta_axis {
                let values = f(NoiseRealization::new(eps, theta));
                for (a, v) in acc.iter_mut().zip(values) {
                    if !v.is_finite() {
                        return Err(Error::NonFiniteSample { eps, theta });
                    }
                    *a += we * wt * v;
                }
            }
        }
        Ok(acc)
    }
}

/// `E[f(eps, theta)]` with `eps ~ N(0, eta_eps^2)`, `theta ~ N(0, eta_theta^2)`.
pub fn average_over_noise<F: Fn(NoiseRealization) -> f64>(f: F, noise: &NoiseParams, order: usize) -> Result<f64> {
    NoiseAverager::new(noise, order)?.average(f)
}
