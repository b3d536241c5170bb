// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix exponential would overflow (log-norm bound {bound:.3e})")]
    Overflow { bound: f64 },

    /// Raised when doubling the truncation order moves the value by more than the tolerance.
    #[error("truncation at order {order} is not converged: |v(l) - v(2l)| = {change:.3e} > {tolerance:.1e}")]
    Truncation {
        order: usize,
        change: f64,
        tolerance: f64,
    },

    #[error("imaginary residue {residue:.3e} exceeds {tolerance:.1e}")]
    NonReal { residue: f64, tolerance: f64 },

    #[error("degenerate batch: denominator sum of batch {batch} is not positive")]
    DegenerateBatch { batch: usize },

    #[error("xi grids do not align; offending values: {0:?}")]
    GridMismatch(Vec<f64>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::Parameter(_) | Error::GridMismatch(_) => 2,
            Error::Overflow { .. }
            | Error::Truncation { .. }
            | Error::NonReal { .. }
            | Error::DegenerateBatch { .. } => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        }
    }
}
