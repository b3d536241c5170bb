// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Index-ordered map over `0..n`, data-parallel with rayon when the
//! `parallel` feature is enabled and sequential otherwise.
//!
//! Results are always returned in index order, so any reduction performed
//! afterwards by the caller is independent of the number of workers.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// `workers == 0` uses rayon's global pool.
    #[default]
    Parallel,
    Workers(usize),
}

impl Execution {
    pub fn with_workers(workers: usize) -> Self {
        match workers {
            1 => Execution::Sequential,
            0 => Execution::Parallel,
            w => Execution::Workers(w),
        }
    }

    pub fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match *self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(feature = "parallel")]
            Execution::Workers(w) => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                    Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                    Err(_) => (0..n).map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel | Execution::Workers(_) => (0..n).map(f).collect(),
        }
    }
}
