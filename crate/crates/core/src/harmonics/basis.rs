// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use super::quadrature::RadialQuadrature;

/// Extra quadrature nodes beyond `2l` used by [`SpectralBasis::new`].
pub const QUADRATURE_MARGIN: usize = 8;

/// Orthonormal radial polynomials `φ_0 … φ_{l−1}` for `dμ = 12x³(1−x²)dx`.
///
/// `φ_j` is a polynomial of degree `j` in `y = 1 − 2x²` with positive leading
/// coefficient. They are produced by orthogonalizing `1, y, y², …` against the
/// quadrature, which also yields the three-term recurrence
/// `y φ_j = b_j φ_{j−1} + a_j φ_j + b_{j+1} φ_{j+1}` used for evaluation off
/// the nodes.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    order: usize,
    quadrature: RadialQuadrature,
    /// `a_j`, j = 0..l
    diag: Vec<f64>,
    /// `b_{j+1}`, j = 0..l−1
    off: Vec<f64>,
    /// `values[(k, j)] = φ_j(x_k)` on the quadrature nodes.
    values: DMatrix<f64>,
}

impl SpectralBasis {
    /// Basis of size `l` on the default `2l + 8` point quadrature.
    pub fn new(order: usize) -> Self {
        Self::with_quadrature(order, 2 * order + QUADRATURE_MARGIN)
    }

    /// # Panics
    /// If `order == 0` or the quadrature has fewer than `order + 1` nodes.
    pub fn with_quadrature(order: usize, points: usize) -> Self {
        assert!(order >= 1, "basis order must be positive");
        assert!(
            points > order,
            "quadrature with {points} nodes cannot resolve {order} basis functions"
        );
        let quadrature = RadialQuadrature::new(points);
        let m = points;
        let w = &quadrature.weights;
        let y = &quadrature.y;
        let dot = |u: &[f64], v: &[f64]| -> f64 { (0..m).map(|k| w[k] * u[k] * v[k]).sum() };

        let mut cols: Vec<Vec<f64>> = vec![vec![1.0; m]];
        let mut diag = Vec::with_capacity(order);
        let mut off = Vec::with_capacity(order);
        for j in 0..order {
            let cur = &cols[j];
            let mut next: Vec<f64> = (0..m).map(|k| y[k] * cur[k]).collect();
            let a = dot(&next, cur);
            diag.push(a);
            if j + 1 == order {
                break;
            }
            for k in 0..m {
                next[k] -= a * cur[k];
                if j > 0 {
                    next[k] -= off[j - 1] * cols[j - 1][k];
                }
            }
            // two passes of full reorthogonalization
            for _ in 0..2 {
                for prev in &cols {
                    let c = dot(&next, prev);
                    for k in 0..m {
                        next[k] -= c * prev[k];
                    }
                }
            }
            let b = dot(&next, &next).sqrt();
            off.push(b);
            for v in next.iter_mut() {
                *v /= b;
            }
            cols.push(next);
        }

        let values = DMatrix::from_fn(m, order, |k, j| cols[j][k]);
        Self {
            order,
            quadrature,
            diag,
            off,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn quadrature(&self) -> &RadialQuadrature {
        &self.quadrature
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature.order()
    }

    /// Recurrence coefficients `(a_j, b_{j+1})`.
    pub fn recurrence(&self) -> (&[f64], &[f64]) {
        (&self.diag, &self.off)
    }

    /// `φ_j(x_k)` on the quadrature nodes (rows: nodes, columns: `j`).
    pub fn node_values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// All `φ_0(x) … φ_{l−1}(x)` at an arbitrary radial point.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        self.eval_y(1.0 - 2.0 * x * x)
    }

    /// `φ_j(x)`.
    pub fn eval(&self, j: usize, x: f64) -> f64 {
        assert!(
            j < self.order,
            "φ_{j} is outside a basis of size {}",
            self.order
        );
        self.eval_y(1.0 - 2.0 * x * x)[j]
    }

    pub(crate) fn eval_y(&self, y: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.order);
        out.push(1.0);
        for j in 0..self.order - 1 {
            let prev = if j > 0 {
                self.off[j - 1] * out[j - 1]
            } else {
                0.0
            };
            let v = ((y - self.diag[j]) * out[j] - prev) / self.off[j];
            out.push(v);
        }
        out
    }

    /// Gram matrix `∫ φ_i φ_j dμ` under the stored quadrature.
    pub fn gram(&self) -> DMatrix<f64> {
        self.weighted_gram(|_| 1.0)
    }

    /// `∫ φ_i(x) g(x) φ_j(x) dμ` under the stored quadrature.
    pub fn weighted_gram(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let q = &self.quadrature;
        let scaled = DMatrix::from_fn(q.order(), self.order, |k, j| {
            q.weights[k] * g(q.x[k]) * self.values[(k, j)]
        });
        self.values.transpose() * scaled
    }
}

/// `build_basis(l)`.
pub fn build_basis(order: usize) -> SpectralBasis {
    SpectralBasis::new(order)
}

/// Multiplication by `ν = 1 − 2x²` in the `φ` basis.
#[derive(Debug, Clone)]
pub struct TridiagonalNu {
    pub order: usize,
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    /// Largest `|ν̂_{ij}|` with `|i − j| ≥ 2` seen in the quadrature matrix.
    pub max_outside_band: f64,
}

impl TridiagonalNu {
    pub fn from_basis(basis: &SpectralBasis) -> Self {
        let dense = basis.weighted_gram(|x| 1.0 - 2.0 * x * x);
        let l = basis.order();
        let mut max_outside_band = 0.0f64;
        for i in 0..l {
            for j in 0..l {
                if i.abs_diff(j) >= 2 {
                    max_outside_band = max_outside_band.max(dense[(i, j)].abs());
                }
            }
        }
        Self {
            order: l,
            diagonal: (0..l).map(|i| dense[(i, i)]).collect(),
            off_diagonal: (0..l.saturating_sub(1))
                .map(|i| 0.5 * (dense[(i, i + 1)] + dense[(i + 1, i)]))
                .collect(),
            max_outside_band,
        }
    }

    /// Closed-form magnitude `√((j+1)(j+3) / ((2j+3)(2j+5)))` of the `(j, j+1)` entry.
    pub fn closed_form_off_diagonal(j: usize) -> f64 {
        let j = j as f64;
        ((j + 1.0) * (j + 3.0) / ((2.0 * j + 3.0) * (2.0 * j + 5.0))).sqrt()
    }

    /// Dense symmetric tridiagonal matrix (exact zeros off the band).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.order, self.order);
        for i in 0..self.order {
            m[(i, i)] = self.diagonal[i];
        }
        for (i, &b) in self.off_diagonal.iter().enumerate() {
            m[(i, i + 1)] = b;
            m[(i + 1, i)] = b;
        }
        m
    }
}

/// `nu_matrix(l)` on the default quadrature.
pub fn nu_matrix(order: usize) -> TridiagonalNu {
    TridiagonalNu::from_basis(&SpectralBasis::new(order))
}
