// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Second correlation function of characteristic polynomials for real
//! symmetric Gaussian block band matrices.
//!
//! The crate evaluates the three limiting regimes of the normalized moment
//! `F₂(E + ξ/2Nρ, E − ξ/2Nρ) / F₂(E, E)` (localized, critical and
//! delocalized), the finite-size propagator that converges to the critical
//! curve, and a Monte Carlo estimator that samples the ensemble directly.

pub mod error;
pub mod exec;
pub mod harmonics;
pub mod limits;
pub mod linalg;
pub mod mc;
pub mod scaling;

pub mod cli;

pub use error::{Error, Result};
