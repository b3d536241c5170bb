// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Gauss rules by the Golub–Welsch eigenvalue method.
//!
//! The radial measure `12x³(1−x²)dx` on `[0, 1]` becomes `(3/4)(1−y²)dy` on
//! `[-1, 1]` under `y = 1 − 2x²`, which is the Jacobi weight with
//! `α = β = 1`. All rules here carry total mass 1.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a Gauss–Jacobi rule on `[-1, 1]` for the normalized
/// weight `(1−y)^α (1+y)^β / Z`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn jacobi(points: usize, alpha: f64, beta: f64) -> Self {
        assert!(points >= 1, "a Gauss rule needs at least one node");
        assert!(alpha > -1.0 && beta > -1.0);
        let (diag, off) = jacobi_recurrence(points, alpha, beta);
        let mut jm = DMatrix::<f64>::zeros(points, points);
        for i in 0..points {
            jm[(i, i)] = diag[i];
            if i + 1 < points {
                jm[(i, i + 1)] = off[i];
                jm[(i + 1, i)] = off[i];
            }
        }
        let eig = SymmetricEigen::new(jm);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        // Newton polish on p_m, then Christoffel weights 1 / Σ_{j<m} p_j(y)²
        let mut weights = Vec::with_capacity(points);
        for y in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp, _) = orthonormal_values(&diag, &off, *y);
                if dp != 0.0 {
                    *y -= p / dp;
                }
            }
            let (_, _, christoffel) = orthonormal_values(&diag, &off, *y);
            weights.push(1.0 / christoffel);
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        Self { nodes, weights }
    }

    pub fn legendre(points: usize) -> Self {
        Self::jacobi(points, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mean of `f` over `[a, b]` times `(b − a)` (only meaningful for the Legendre rule).
    pub fn integrate_interval(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum();
        s * (b - a)
    }
}

/// Orthonormal recurrence at `y`: returns `(p_m(y), p_m'(y), Σ_{j<m} p_j(y)²)`,
/// with `p_m` scaled by the last off-diagonal so that it is finite at `j = m`.
fn orthonormal_values(diag: &[f64], off: &[f64], y: f64) -> (f64, f64, f64) {
    let m = diag.len();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut sum = 0.0;
    for j in 0..m {
        sum += p * p;
        let b_prev = if j > 0 { off[j - 1] } else { 0.0 };
        // the last step is left unnormalized (monic-like in the final coefficient)
        let b_next = if j + 1 < m { off[j] } else { 1.0 };
        let p_next = ((y - diag[j]) * p - b_prev * p_prev) / b_next;
        let d_next = ((y - diag[j]) * d + p - b_prev * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d, sum)
}

/// Diagonal and off-diagonal of the symmetric Jacobi matrix for Jacobi polynomials.
fn jacobi_recurrence(points: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let diag = (0..points)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
            }
        })
        .collect();
    let off = (1..points)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            let b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
            b.sqrt()
        })
        .collect();
    (diag, off)
}

/// Gauss rule for the probability measure `dμ = 12x³(1−x²)dx` on `[0, 1]`.
///
/// An `m`-point rule integrates every polynomial in `x²` of degree at most
/// `2m − 1` exactly.
#[derive(Debug, Clone)]
pub struct RadialQuadrature {
    /// Nodes in the radial variable `x ∈ (0, 1)`, ascending.
    pub x: Vec<f64>,
    /// `y = 1 − 2x²` at each node (the value of `ν`).
    pub y: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialQuadrature {
    pub fn new(points: usize) -> Self {
        let rule = GaussRule::jacobi(points, 1.0, 1.0);
        // y descending <=> x ascending
        let mut x = Vec::with_capacity(points);
        let mut y = Vec::with_capacity(points);
        let mut weights = Vec::with_capacity(points);
        for (&yk, &wk) in rule.nodes.iter().zip(&rule.weights).rev() {
            x.push((0.5 * (1.0 - yk)).max(0.0).sqrt());
            y.push(yk);
            weights.push(wk);
        }
        Self { x, y, weights }
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }

    /// `∫ f(x) dμ(x)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.x
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `quadrature_rule(m)`: the `m`-point Gauss rule for the radial measure.
pub fn quadrature_rule(points: usize) -> RadialQuadrature {
    RadialQuadrature::new(points)
}
