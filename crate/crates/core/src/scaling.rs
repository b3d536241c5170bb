// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Spectral constants of the ensemble at a bulk energy `E`: semicircle
//! density, the two saddle points on the unit circle, the microscopic
//! rescaling of the spectral arguments and the constant `t* = (2πρ)²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Constants attached to a bulk energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub energy: f64,
    pub rho: f64,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub t_star: f64,
}

impl EnergyParams {
    pub fn new(energy: f64) -> Result<Self> {
        let (a_plus, a_minus) = saddle_points(energy)?;
        Ok(Self {
            energy,
            rho: semicircle_density(energy)?,
            a_plus,
            a_minus,
            t_star: t_star(energy)?,
        })
    }
}

/// Pair of spectral arguments `E ± ξ / (2Nρ(E))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub xi: f64,
    pub dim: usize,
}

fn check_bulk(energy: f64) -> Result<()> {
    if energy.is_finite() && energy.abs() < 2.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "E",
            value: energy,
            domain: "(-2, 2)",
        })
    }
}

/// Wigner semicircle density `√(4 − E²) / 2π`, total on the closed interval `[-2, 2]`.
pub fn semicircle_density(energy: f64) -> Result<f64> {
    if !(energy.is_finite() && energy.abs() <= 2.0) {
        return Err(Error::Domain {
            name: "E",
            value: energy,
            domain: "[-2, 2]",
        });
    }
    Ok((4.0 - energy * energy).max(0.0).sqrt() / (2.0 * PI))
}

/// Saddle points `a± = (iE ± √(4 − E²)) / 2`.
pub fn saddle_points(energy: f64) -> Result<(Complex64, Complex64)> {
    check_bulk(energy)?;
    let root = (4.0 - energy * energy).sqrt();
    Ok((
        Complex64::new(0.5 * root, 0.5 * energy),
        Complex64::new(-0.5 * root, 0.5 * energy),
    ))
}

/// `t* = (2πρ(E))² = 4 − E²`.
pub fn t_star(energy: f64) -> Result<f64> {
    check_bulk(energy)?;
    Ok(4.0 - energy * energy)
}

/// Microscopic pair around `E` for a matrix of dimension `dim = nW`.
pub fn scaled_pair(energy: f64, xi: f64, dim: usize) -> Result<ScaledPair> {
    check_bulk(energy)?;
    if dim == 0 {
        return Err(Error::Parameter("matrix dimension must be positive".into()));
    }
    let shift = xi / (2.0 * dim as f64 * semicircle_density(energy)?);
    Ok(ScaledPair {
        lambda1: energy + shift,
        lambda2: energy - shift,
        xi,
        dim,
    })
}
