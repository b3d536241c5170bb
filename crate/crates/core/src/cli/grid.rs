// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Parses a `ξ` grid: `min:max:count` (inclusive, evenly spaced), a comma
/// separated list, or a single value.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::Parameter(format!("bad xi grid {spec:?}: {why}"));
    let parse = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| bad("not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite"))
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [min, max, count] => {
            let (min, max) = (parse(min)?, parse(max)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| bad("count must be an integer"))?;
            match count {
                0 => Err(bad("count must be positive")),
                1 if min != max => Err(bad("a one-point grid needs min == max")),
                1 => Ok(vec![min]),
                _ => {
                    let step = (max - min) / (count - 1) as f64;
                    Ok((0..count)
                        .map(|i| {
                            if i + 1 == count {
                                max
                            } else {
                                min + i as f64 * step
                            }
                        })
                        .collect())
                }
            }
        }
        [list] => list.split(',').map(parse).collect(),
        _ => Err(bad("expected min:max:count")),
    }
}
