// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Limiting values of the normalized second moment in the three regimes, and
//! the finite-size one-step propagator whose `(n−1)`-th power converges to
//! the critical curve.
//!
//! Everything is expressed in the truncated basis `φ_0 … φ_{l−1}`: the
//! Laplace–Beltrami operator `Δ_l = diag(j(j+3))` and the tridiagonal `ν̂_l`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::harmonics::{ds_function, laplace_spectrum, SpectralBasis, TridiagonalNu};
use crate::linalg::{matrix_exponential, matrix_power, CMatrix};
use crate::scaling;

/// Default truncation order of the operator limits.
pub const DEFAULT_ORDER: usize = 30;
/// Allowed imaginary residue of the critical limit.
pub const CRITICAL_IMAG_TOL: f64 = 1e-10;
/// Allowed imaginary residue of the finite-size propagator.
pub const PROPAGATOR_IMAG_TOL: f64 = 1e-9;
/// Allowed change of a value when the truncation order is doubled.
pub const TRUNCATION_TOL: f64 = 1e-9;

/// `Δ_l` and `ν̂_l` for one truncation order.
#[derive(Debug, Clone)]
pub struct OperatorModel {
    laplace: Vec<f64>,
    nu: TridiagonalNu,
    quadrature_order: usize,
}

impl OperatorModel {
    pub fn new(order: usize) -> Self {
        Self::from_basis(&SpectralBasis::new(order))
    }

    pub fn with_quadrature(order: usize, points: usize) -> Self {
        Self::from_basis(&SpectralBasis::with_quadrature(order, points))
    }

    pub fn from_basis(basis: &SpectralBasis) -> Self {
        Self {
            laplace: laplace_spectrum(basis.order()),
            nu: TridiagonalNu::from_basis(basis),
            quadrature_order: basis.quadrature_order(),
        }
    }

    pub fn order(&self) -> usize {
        self.laplace.len()
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn nu(&self) -> &TridiagonalNu {
        &self.nu
    }

    /// `a·Δ_l + i b·ν̂_l`.
    fn combination(&self, a: f64, b: f64) -> CMatrix {
        let l = self.order();
        let mut m = CMatrix::zeros(l, l);
        for j in 0..l {
            m[(j, j)] = Complex64::new(a * self.laplace[j], b * self.nu.diagonal[j]);
        }
        for (j, &v) in self.nu.off_diagonal.iter().enumerate() {
            m[(j, j + 1)] = Complex64::new(0.0, b * v);
            m[(j + 1, j)] = Complex64::new(0.0, b * v);
        }
        m
    }

    pub fn generator(&self, xi: f64, c_star: f64) -> TruncatedGenerator {
        TruncatedGenerator {
            order: self.order(),
            c_star,
            xi,
            matrix: self.combination(c_star, PI * xi),
        }
    }

    /// Raw complex `(e^{−(C*Δ + iπξν̂)} e₀, e₀)`.
    pub fn critical_raw(&self, xi: f64, c_star: f64) -> Result<Complex64> {
        if !(c_star >= 0.0 && c_star.is_finite()) {
            return Err(Error::Parameter(format!(
                "C* must be finite and >= 0, got {c_star}"
            )));
        }
        let g = self.generator(xi, c_star);
        let e = matrix_exponential(&(-g.matrix))?;
        Ok(e[(0, 0)])
    }

    pub fn critical(&self, xi: f64, c_star: f64) -> Result<f64> {
        real_part(self.critical_raw(xi, c_star)?, CRITICAL_IMAG_TOL)
    }

    /// One-step operator `K₀ = I − Δ_l/(t* W) − (iπξ/n) ν̂_l`.
    pub fn one_step(&self, xi: f64, n: usize, w: usize, energy: f64) -> Result<CMatrix> {
        if n < 2 {
            return Err(Error::Parameter(format!("need n >= 2 blocks, got {n}")));
        }
        if w < 1 {
            return Err(Error::Parameter("block size W must be positive".into()));
        }
        let t = scaling::t_star(energy)?;
        let l = self.order();
        let step = self.combination(1.0 / (t * w as f64), PI * xi / n as f64);
        Ok(CMatrix::identity(l, l) - step)
    }

    pub fn finite_raw(&self, xi: f64, n: usize, w: usize, energy: f64) -> Result<Complex64> {
        let k0 = self.one_step(xi, n, w, energy)?;
        Ok(matrix_power(&k0, (n - 1) as u64)?[(0, 0)])
    }

    pub fn finite(&self, xi: f64, n: usize, w: usize, energy: f64) -> Result<f64> {
        real_part(self.finite_raw(xi, n, w, energy)?, PROPAGATOR_IMAG_TOL)
    }
}

fn real_part(z: Complex64, tolerance: f64) -> Result<f64> {
    if z.im.abs() > tolerance {
        return Err(Error::NonReal {
            residue: z.im.abs(),
            tolerance,
        });
    }
    Ok(z.re)
}

/// `C*·Δ_l + iπξ·ν̂_l`.
#[derive(Debug, Clone)]
pub struct TruncatedGenerator {
    pub order: usize,
    pub c_star: f64,
    pub xi: f64,
    pub matrix: CMatrix,
}

/// `DS(πξ)`.
pub fn delocalized_limit(xi: f64) -> f64 {
    ds_function(PI * xi)
}

pub fn localized_limit(_xi: f64) -> f64 {
    1.0
}

/// `C* = C_* / t*(E)` for `n = C_* W`.
pub fn c_star_from_ratio(c_sub: f64, energy: f64) -> Result<f64> {
    Ok(c_sub / scaling::t_star(energy)?)
}

/// `(e^{−C*Δ − iπξν̂} 1, 1)` truncated to `l` basis functions.
pub fn critical_limit(xi: f64, c_star: f64, order: usize) -> Result<f64> {
    OperatorModel::new(order).critical(xi, c_star)
}

/// Value together with the change observed when the order is doubled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedValue {
    pub value: f64,
    pub truncation_error: f64,
}

/// [`critical_limit`] with the mandatory doubling check.
pub fn critical_limit_checked(xi: f64, c_star: f64, order: usize) -> Result<CheckedValue> {
    let value = critical_limit(xi, c_star, order)?;
    let doubled = critical_limit(xi, c_star, 2 * order)?;
    let change = (value - doubled).abs();
    if change > TRUNCATION_TOL {
        return Err(Error::Truncation {
            order,
            change,
            tolerance: TRUNCATION_TOL,
        });
    }
    Ok(CheckedValue {
        value,
        truncation_error: change,
    })
}

/// `Re (K₀^{n−1} e₀, e₀)`.
pub fn finite_n_propagator(xi: f64, n: usize, w: usize, energy: f64, order: usize) -> Result<f64> {
    OperatorModel::new(order).finite(xi, n, w, energy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "lowercase")]
pub enum Regime {
    Localized,
    Delocalized,
    Critical { c_star: f64 },
    Finite { n: usize, w: usize, energy: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Localized => "localized",
            Regime::Delocalized => "delocalized",
            Regime::Critical { .. } => "critical",
            Regime::Finite { .. } => "finite",
        }
    }

    fn uses_operator(&self) -> bool {
        matches!(self, Regime::Critical { .. } | Regime::Finite { .. })
    }
}

/// Theoretical values on a grid of `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeCurve {
    pub regime: Regime,
    pub xi: Vec<f64>,
    pub values: Vec<f64>,
    /// Pointwise `|v(l) − v(2l)|`; zero for closed forms.
    pub truncation_errors: Vec<f64>,
    pub order: usize,
    pub quadrature_order: usize,
}

impl RegimeCurve {
    pub fn max_truncation_error(&self) -> f64 {
        self.truncation_errors.iter().copied().fold(0.0, f64::max)
    }

    /// Fails when any point moved by more than `tolerance` under doubling.
    pub fn check_truncation(&self, tolerance: f64) -> Result<()> {
        let change = self.max_truncation_error();
        if change > tolerance {
            return Err(Error::Truncation {
                order: self.order,
                change,
                tolerance,
            });
        }
        Ok(())
    }
}

/// Options for [`regime_curve_with`]; `quadrature_order: None` keeps the `2l + 8` default.
#[derive(Debug, Clone, Copy, Default)]
pub struct CurveOptions {
    pub quadrature_order: Option<usize>,
    pub execution: Execution,
}

pub fn regime_curve(regime: Regime, order: usize, xi: &[f64]) -> Result<RegimeCurve> {
    regime_curve_with(regime, order, xi, CurveOptions::default())
}

/// Evaluates a regime on a grid. Operator regimes are evaluated at orders `l`
/// and `2l`; grid points are independent and run through `options.execution`.
pub fn regime_curve_with(
    regime: Regime,
    order: usize,
    xi: &[f64],
    options: CurveOptions,
) -> Result<RegimeCurve> {
    if order == 0 {
        return Err(Error::Parameter("truncation order must be positive".into()));
    }
    if let Some(bad) = xi.iter().find(|x| !x.is_finite()) {
        return Err(Error::Parameter(format!("non-finite xi {bad}")));
    }
    let build = |l: usize| match options.quadrature_order {
        Some(m) if m > l => Ok(OperatorModel::with_quadrature(l, m)),
        Some(m) => Err(Error::Parameter(format!(
            "quadrature order {m} must exceed the truncation order {l}"
        ))),
        None => Ok(OperatorModel::new(l)),
    };
    let (values, errors, quadrature_order) = if regime.uses_operator() {
        let small = build(order)?;
        // the doubled model needs its own quadrature margin
        let large = match options.quadrature_order {
            Some(m) => OperatorModel::with_quadrature(2 * order, m.max(2 * order + 1)),
            None => OperatorModel::new(2 * order),
        };
        let eval = |model: &OperatorModel, x: f64| match regime {
            Regime::Critical { c_star } => model.critical(x, c_star),
            Regime::Finite { n, w, energy } => model.finite(x, n, w, energy),
            _ => unreachable!(),
        };
        let pairs = options.execution.map_indexed(xi.len(), |i| {
            let a = eval(&small, xi[i])?;
            let b = eval(&large, xi[i])?;
            Ok::<_, Error>((a, (a - b).abs()))
        });
        let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
        (
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            small.quadrature_order(),
        )
    } else {
        let f = match regime {
            Regime::Localized => localized_limit,
            _ => delocalized_limit,
        };
        (xi.iter().map(|&x| f(x)).collect(), vec![0.0; xi.len()], 0)
    };
    Ok(RegimeCurve {
        regime,
        xi: xi.to_vec(),
        values,
        truncation_errors: errors,
        order,
        quadrature_order,
    })
}
