// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo oracle: samples the block band ensemble directly and
//! estimates `F₂(λ₁(ξ), λ₂(ξ)) / F₂(E, E)` with common random numbers.

mod ensemble;
mod estimator;
mod logsign;

pub use ensemble::{
    kolmogorov_to_semicircle, sample_matrix, semicircle_cdf, variance_profile, EnsembleParams,
    VarianceProfile,
};
pub use estimator::{
    aggregate, estimate_ratio, pooled_eigenvalues, sample_products, sample_rng, McConfig,
    McEstimate, McRun, DEFAULT_BATCHES,
};
pub use logsign::{char_poly_product, product_from_spectrum, symmetric_spectrum, LogSignValue};
