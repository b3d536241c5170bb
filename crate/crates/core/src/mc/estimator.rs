// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ensemble::{sample_matrix, EnsembleParams, VarianceProfile};
use super::logsign::{product_from_spectrum, symmetric_spectrum, LogSignValue};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::scaling::scaled_pair;

/// Number of contiguous sample batches behind the error bars.
pub const DEFAULT_BATCHES: usize = 50;

#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
    pub execution: Execution,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            batches: DEFAULT_BATCHES,
            execution: Execution::default(),
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub xi: f64,
    pub ratio: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub params: EnsembleParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McRun {
    pub estimates: Vec<McEstimate>,
    /// Common log offset subtracted from every product before summation.
    pub log_offset: f64,
    /// Batches whose denominator sum was not positive.
    pub degenerate_batches: Vec<usize>,
}

/// Random stream of sample `m`: ChaCha8 keyed by `seed`, stream number `m`.
pub fn sample_rng(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

/// For every sample `m`, `det(a − H_m) det(b − H_m)` for each pair `(a, b)`.
/// One eigendecomposition per sample is shared by all pairs.
pub fn sample_products(
    params: &EnsembleParams,
    pairs: &[(f64, f64)],
    config: &McConfig,
) -> Vec<Vec<LogSignValue>> {
    let profile = VarianceProfile::for_params(params);
    config.execution.map_indexed(config.samples, |m| {
        let mut rng = sample_rng(config.seed, m as u64);
        let h = sample_matrix(&profile, &mut rng);
        let spectrum = symmetric_spectrum(&h);
        pairs
            .iter()
            .map(|&(a, b)| product_from_spectrum(&spectrum, a, b))
            .collect()
    })
}

/// Batch-ratio aggregation of per-sample products.
///
/// Column `denominator` holds the products at `ξ = 0`. Products are rescaled
/// by `e^{−(max log + shift)}` before summation; `shift` only exists so tests
/// can check invariance under a common factor. Returns `(ratio, std_error)`
/// per column and the list of degenerate batches.
pub fn aggregate(
    products: &[Vec<LogSignValue>],
    denominator: usize,
    batches: usize,
    shift: f64,
) -> (Vec<(f64, f64)>, f64, Vec<usize>) {
    let samples = products.len();
    let cols = products.first().map_or(0, Vec::len);
    let offset = products
        .iter()
        .flatten()
        .filter(|v| v.sign != 0)
        .map(|v| v.log_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    let offset = if offset.is_finite() { offset } else { 0.0 } + shift;

    let batches = batches.clamp(1, samples.max(1));
    let mut sums = vec![vec![0.0f64; cols]; batches];
    for b in 0..batches {
        let range = (b * samples / batches)..((b + 1) * samples / batches);
        for row in &products[range] {
            for (acc, v) in sums[b].iter_mut().zip(row) {
                *acc += v.scaled(offset);
            }
        }
    }
    let degenerate: Vec<usize> = (0..batches)
        .filter(|&b| sums[b][denominator] <= 0.0)
        .collect();

    let den_total: f64 = sums.iter().map(|s| s[denominator]).sum();
    let bf = batches as f64;
    let out = (0..cols)
        .map(|c| {
            let num_total: f64 = sums.iter().map(|s| s[c]).sum();
            let ratio = num_total / den_total;
            if batches < 2 {
                return (ratio, f64::NAN);
            }
            let ss: f64 = sums
                .iter()
                .map(|s| {
                    let d = s[c] - ratio * s[denominator];
                    d * d
                })
                .sum();
            (ratio, (bf / (bf - 1.0) * ss).sqrt() / den_total)
        })
        .collect();
    (out, offset, degenerate)
}

/// `R̂(ξ) = Σ_m P_m(ξ) / Σ_m P_m(0)` on a common set of `M` samples.
///
/// The result is a pure function of `(params, xi_grid, samples, seed, batches)`:
/// sample `m` always uses stream `m`, and sums are taken in sample order.
pub fn estimate_ratio(
    params: &EnsembleParams,
    xi_grid: &[f64],
    config: &McConfig,
) -> Result<McRun> {
    if config.samples < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 samples, got {}",
            config.samples
        )));
    }
    let dim = params.dim();
    let mut pairs = xi_grid
        .iter()
        .map(|&xi| scaled_pair(params.energy, xi, dim).map(|p| (p.lambda1, p.lambda2)))
        .collect::<Result<Vec<_>>>()?;
    pairs.push((params.energy, params.energy));
    let denominator = pairs.len() - 1;

    let products = sample_products(params, &pairs, config);
    let (stats, log_offset, degenerate_batches) =
        aggregate(&products, denominator, config.batches, 0.0);

    let estimates = xi_grid
        .iter()
        .zip(&stats)
        .map(|(&xi, &(ratio, std_error))| McEstimate {
            xi,
            ratio,
            std_error,
            samples: config.samples,
            seed: config.seed,
            params: *params,
        })
        .collect();
    Ok(McRun {
        estimates,
        log_offset,
        degenerate_batches,
    })
}

/// Eigenvalues of `samples` independent draws, concatenated in sample order.
pub fn pooled_eigenvalues(
    params: &EnsembleParams,
    samples: usize,
    seed: u64,
    execution: Execution,
) -> Vec<f64> {
    let profile = VarianceProfile::for_params(params);
    execution
        .map_indexed(samples, |m| {
            let mut rng = sample_rng(seed, m as u64);
            symmetric_spectrum(&sample_matrix(&profile, &mut rng))
        })
        .concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::ds_function;
    use rand::RngCore;
    use std::f64::consts::PI;

    fn params(n: usize, w: usize) -> EnsembleParams {
        EnsembleParams::new(n, w, 0.2, 0.0).unwrap()
    }

    #[test]
    fn substreams_are_distinct_and_reproducible() {
        let a = sample_rng(7, 0).next_u64();
        let b = sample_rng(7, 1).next_u64();
        let c = sample_rng(8, 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, sample_rng(7, 0).next_u64());
    }

    #[test]
    fn zero_xi_is_exactly_one() {
        let run = estimate_ratio(&params(1, 8), &[0.0, 0.5], &McConfig::new(200, 3)).unwrap();
        assert_eq!(run.estimates[0].ratio, 1.0);
        assert_eq!(run.estimates[0].std_error, 0.0);
        assert!(run.estimates[1].std_error > 0.0);
        assert!(run.degenerate_batches.is_empty());
    }

    #[test]
    fn symmetric_grid_gives_identical_ratios() {
        let grid = [-1.5, -0.5, 0.0, 0.5, 1.5];
        let run = estimate_ratio(&params(2, 4), &grid, &McConfig::new(300, 11)).unwrap();
        let e = &run.estimates;
        assert_eq!(e[0].ratio, e[4].ratio);
        assert_eq!(e[1].ratio, e[3].ratio);
        assert_eq!(e[0].std_error, e[4].std_error);
    }

    #[test]
    fn invariant_under_common_factor() {
        let pairs = [(0.1, -0.1), (0.3, -0.3), (0.0, 0.0)];
        let products = sample_products(&params(1, 6), &pairs, &McConfig::new(500, 5));
        let (base, _, _) = aggregate(&products, 2, 50, 0.0);
        for shift in [-30.0, -3.7, 12.5, 200.0] {
            let (moved, _, _) = aggregate(&products, 2, 50, shift);
            for (a, b) in base.iter().zip(&moved) {
                assert!((a.0 - b.0).abs() <= 1e-13 * a.0.abs());
                assert!((a.1 - b.1).abs() <= 1e-12 * a.1.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn degenerate_batches_are_reported() {
        let zero = LogSignValue::ZERO;
        let one = LogSignValue::ONE;
        let products = vec![
            vec![one, zero],
            vec![one, zero],
            vec![one, one],
            vec![one, one],
        ];
        let (_, _, degenerate) = aggregate(&products, 1, 2, 0.0);
        assert_eq!(degenerate, vec![0]);
    }

    #[test]
    fn deterministic_across_execution() {
        let grid = [0.0, 0.25, 1.0];
        let p = params(2, 5);
        let seq = estimate_ratio(
            &p,
            &grid,
            &McConfig::new(400, 42).with_execution(Execution::Sequential),
        )
        .unwrap();
        let par = estimate_ratio(
            &p,
            &grid,
            &McConfig::new(400, 42).with_execution(Execution::with_workers(8)),
        )
        .unwrap();
        assert_eq!(seq, par);
        let other = estimate_ratio(&p, &grid, &McConfig::new(400, 43)).unwrap();
        assert_ne!(seq.estimates[1].ratio, other.estimates[1].ratio);
    }

    #[test]
    fn small_goe_trends_to_ds() {
        // single block, W = 16: finite-size value at ξ = 0.5 is within a few
        // percent of DS(π/2) ≈ 0.774 and the estimator is well-resolved
        let run = estimate_ratio(&params(1, 16), &[0.5], &McConfig::new(4000, 1)).unwrap();
        let e = &run.estimates[0];
        assert!(
            (e.ratio - ds_function(0.5 * PI)).abs() < 0.05 + 4.0 * e.std_error,
            "{e:?}"
        );
    }

    #[test]
    fn rejects_too_few_samples() {
        assert!(estimate_ratio(&params(1, 4), &[0.0], &McConfig::new(1, 0)).is_err());
    }
}
