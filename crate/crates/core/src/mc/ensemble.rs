// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the block band ensemble: `n` blocks of size `W`, coupling
/// `β` of the variance profile, and the bulk energy `E` probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub w: usize,
    pub beta: f64,
    pub energy: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, w: usize, beta: f64, energy: f64) -> Result<Self> {
        if n < 1 || w < 1 {
            return Err(Error::Parameter(format!(
                "n and W must be positive, got n = {n}, W = {w}"
            )));
        }
        check_beta(beta)?;
        if !(energy.is_finite() && energy.abs() < 2.0) {
            return Err(Error::Domain {
                name: "E",
                value: energy,
                domain: "(-2, 2)",
            });
        }
        Ok(Self { n, w, beta, energy })
    }

    /// Matrix dimension `N = nW`.
    pub fn dim(&self) -> usize {
        self.n * self.w
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 0.25 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "beta must lie in (0, 1/4), got {beta}"
        )))
    }
}

/// Block variance profile `J = (I + βΔ⁰)/W` with the Neumann Laplacian `Δ⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile {
    pub w: usize,
    pub j: DMatrix<f64>,
}

impl VarianceProfile {
    pub fn new(n: usize, w: usize, beta: f64) -> Result<Self> {
        if n < 1 || w < 1 {
            return Err(Error::Parameter("n and W must be positive".into()));
        }
        check_beta(beta)?;
        let wf = w as f64;
        let mut j = DMatrix::zeros(n, n);
        for a in 0..n {
            // Neumann: one neighbour at each end of the chain
            let degree = (a > 0) as usize + (a + 1 < n) as usize;
            j[(a, a)] = (1.0 - beta * degree as f64) / wf;
            if a + 1 < n {
                j[(a, a + 1)] = beta / wf;
                j[(a + 1, a)] = beta / wf;
            }
        }
        Ok(Self { w, j })
    }

    pub fn for_params(params: &EnsembleParams) -> Self {
        Self::new(params.n, params.w, params.beta).expect("validated parameters")
    }

    pub fn blocks(&self) -> usize {
        self.j.nrows()
    }
}

/// `variance_profile(n, W, β)`.
pub fn variance_profile(n: usize, w: usize, beta: f64) -> Result<VarianceProfile> {
    VarianceProfile::new(n, w, beta)
}

/// Draws one matrix of the ensemble.
///
/// Entries of block `(j, k)` are centred Gaussians with variance `J_jk`,
/// except the diagonal of diagonal blocks which has variance `2J_jj`; blocks
/// with `J_jk = 0` stay exactly zero. Only the upper triangle is drawn, in
/// row-major order, and mirrored.
pub fn sample_matrix<R: Rng + ?Sized>(profile: &VarianceProfile, rng: &mut R) -> DMatrix<f64> {
    let n = profile.blocks();
    let w = profile.w;
    let dim = n * w;
    let mut h = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        let (jb, alpha) = (r / w, r % w);
        for c in r..dim {
            let (kb, gamma) = (c / w, c % w);
            let var = profile.j[(jb, kb)];
            if var == 0.0 {
                continue;
            }
            let var = if jb == kb && alpha == gamma {
                2.0 * var
            } else {
                var
            };
            let z: f64 = rng.sample(StandardNormal);
            let v = z * var.sqrt();
            h[(r, c)] = v;
            h[(c, r)] = v;
        }
    }
    h
}

/// Semicircle distribution function on `[-2, 2]`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * std::f64::consts::PI)
            + (0.5 * x).asin() / std::f64::consts::PI
    }
}

/// Kolmogorov distance between the empirical law of `values` and the semicircle.
pub fn kolmogorov_to_semicircle(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = semicircle_cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
