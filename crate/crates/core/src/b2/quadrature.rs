//! Gauss rules for the probability measures `dμ^k(u) ∝ (1 − u²)^{k−1} du` on
//! `[−1, 1]` (Golub–Welsch on the Gegenbauer recurrence).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Default node count.
pub const DEFAULT_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    k: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `M`-point Gauss rule for `μ^k`, weights summing to one.
    pub fn new(k: f64, m: usize) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!("μ^k needs k > 0, got {k}")));
        }
        if m == 0 {
            return Err(Error::Validation("a quadrature rule needs at least one node".into()));
        }
        // monic recurrence p_{n+1} = u p_n − β_n p_{n−1}
        let beta = |n: usize| -> f64 {
            let n = n as f64;
            if n == 1.0 {
                1.0 / (2.0 * k + 1.0)
            } else {
                n * (n + 2.0 * k - 2.0) / (4.0 * (n + k - 0.5) * (n + k - 1.5))
            }
        };
        let mut jacobi = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            let b = beta(i).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..m)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // symmetrize: the measure is even
        for i in 0..m / 2 {
            let j = m - 1 - i;
            let u = 0.5 * (pairs[j].0 - pairs[i].0);
            let w = 0.5 * (pairs[i].1 + pairs[j].1);
            pairs[i] = (-u, w);
            pairs[j] = (u, w);
        }
        if m % 2 == 1 {
            pairs[m / 2].0 = 0.0;
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(Self {
            k,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫ f dμ^k`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(u, w)| w * f(u)).sum()
    }

    /// `∫ u^p dμ^k`.
    pub fn moment(&self, p: i32) -> f64 {
        self.integrate(|u| u.powi(p))
    }
}

/// Exact `∫ u^{2j} dμ^k = Π_{i<j} (2i+1)/(2i+2k+1)`.
pub fn even_moment(k: f64, j: u32) -> f64 {
    (0..j).map(|i| (2.0 * i as f64 + 1.0) / (2.0 * i as f64 + 2.0 * k + 1.0)).product()
}
