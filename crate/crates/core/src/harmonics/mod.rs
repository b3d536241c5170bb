// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Radial harmonic analysis on the rank-one symmetric space, reduced to the
//! coordinate `x = √S(Q) ∈ [0, 1]` with the probability measure
//! `dμ = 12x³(1−x²)dx`.
//!
//! Zonal functions are polynomials in `ν = 1 − 2x²`; the Laplace–Beltrami
//! operator is diagonal on them with eigenvalues `j(j+3)` and multiplication by
//! `ν` is tridiagonal with zero diagonal.

mod basis;
mod quadrature;

pub use basis::{build_basis, nu_matrix, SpectralBasis, TridiagonalNu, QUADRATURE_MARGIN};
pub use quadrature::{quadrature_rule, GaussRule, RadialQuadrature};

use crate::error::{Error, Result};

/// Above this `p` the `e^{−p}` terms are below double precision and dropped.
const LARGE_P: f64 = 700.0;

/// Nodes per panel in the composite rule used for transfer eigenvalues.
const PANEL_NODES: usize = 24;

/// Laplace–Beltrami eigenvalues `j(j+3)` for `j = 0..l`.
pub fn laplace_spectrum(order: usize) -> Vec<f64> {
    (0..order).map(|j| (j * (j + 3)) as f64).collect()
}

/// Radial Itzykson–Zuber integral `∫ exp(−p x²) dμ = (6/p²)(1 − 2/p + e^{−p}(1 + 2/p))`.
///
/// Small `|p|` goes through the Taylor series of the same function to avoid
/// cancellation. `p = 0` is rejected; the limit there is 1.
pub fn iz_integral(p: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "p != 0",
        });
    }
    if p.abs() < 2.0 {
        // Σ_k (−p)^k / k! · 6 / ((k+2)(k+3))
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 0..40u32 {
            let kf = k as f64;
            sum += term * 6.0 / ((kf + 2.0) * (kf + 3.0));
            term *= -p / (kf + 1.0);
        }
        return Ok(sum);
    }
    let tail = if p > LARGE_P {
        0.0
    } else {
        (-p).exp() * (1.0 + 2.0 / p)
    };
    Ok(6.0 / (p * p) * (1.0 - 2.0 / p + tail))
}

/// `3(sin x / x³ − cos x / x²)`, even, equal to 1 at the origin.
pub fn ds_function(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1.0 {
        // 3 Σ_{k≥1} (−1)^{k+1} 2k x^{2k−2} / (2k+1)!
        let x2 = ax * ax;
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 6.0; // (2k+1)! at k = 1
        for k in 1..14u32 {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * 2.0 * kf * pow / fact;
            pow *= x2;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        3.0 * sum
    } else {
        3.0 * (ax.sin() - ax * ax.cos()) / (ax * ax * ax)
    }
}

impl SpectralBasis {
    /// Eigenvalue of the transfer operator with kernel `(p²/6) exp(−p S)` on the
    /// zonal function `φ_j`:
    /// `λ_j(p) = (p²/6) ∫ exp(−p x²) φ_j(x) / φ_j(0) dμ`.
    ///
    /// The integral is done with a composite Gauss–Legendre rule in `u = x²`
    /// with panels of width at most `1/p`, truncated where `e^{−pu}` underflows.
    pub fn transfer_eigenvalue(&self, j: usize, p: f64) -> Result<f64> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                domain: "p > 0",
            });
        }
        if j >= self.order() {
            return Err(Error::Parameter(format!(
                "eigenvalue index {j} needs a basis of size > {j}, have {}",
                self.order()
            )));
        }
        let norm = self.eval_y(1.0)[j];
        let upper = (60.0 / p).min(1.0);
        let panels = (p * upper).ceil().max(1.0) as usize;
        let rule = GaussRule::legendre(PANEL_NODES.max(j + 12));
        let width = upper / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let a = k as f64 * width;
            total += rule.integrate_interval(a, a + width, |u| {
                let phi = self.eval_y(1.0 - 2.0 * u)[j];
                (-p * u).exp() * u * (1.0 - u) * phi
            });
        }
        // (p²/6) · 6u(1−u) du
        Ok(p * p * total / norm)
    }
}

/// `transfer_eigenvalue(j, p)` on a basis just large enough to hold `φ_j`.
pub fn transfer_eigenvalue(j: usize, p: f64) -> Result<f64> {
    SpectralBasis::new(j + 1).transfer_eigenvalue(j, p)
}

/// Leading asymptotics `1 − (j+1)(j+2)/p` of the transfer eigenvalues.
pub fn transfer_eigenvalue_asymptotic(j: usize, p: f64) -> f64 {
    1.0 - ((j + 1) * (j + 2)) as f64 / p
}
