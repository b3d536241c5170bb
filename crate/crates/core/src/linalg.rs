// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix functions: exponential by scaling and squaring with
//! Padé approximants (Higham 2005) and integer powers by repeated squaring.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest accepted matrix order.
pub const MAX_ORDER: usize = 512;

/// `ln(f64::MAX)` with a little headroom.
const LOG_OVERFLOW: f64 = 700.0;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm thresholds for degrees 3, 5, 7, 9, 13
const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.539398330063230e-1,
    9.504178996162932e-1,
    2.097847961257068,
    5.371920351148152,
];

pub fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Logarithmic norm induced by the 1-norm; `‖e^M‖₁ ≤ exp(μ₁(M))`.
pub fn log_norm_1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| {
            m.column(j)
                .iter()
                .enumerate()
                .map(|(i, z)| if i == j { z.re } else { z.norm() })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Parameter(format!(
            "matrix must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > MAX_ORDER {
        return Err(Error::Parameter(format!(
            "matrix order {} exceeds {MAX_ORDER}",
            m.nrows()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Parameter("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// `e^M` for a square complex matrix.
pub fn matrix_exponential(m: &CMatrix) -> Result<CMatrix> {
    check_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let bound = log_norm_1(m);
    if bound > LOG_OVERFLOW {
        return Err(Error::Overflow { bound });
    }

    let norm = one_norm(m);
    for (k, coeffs) in [&PADE3[..], &PADE5[..], &PADE7[..], &PADE9[..]]
        .into_iter()
        .enumerate()
    {
        if norm <= THETA[k] {
            return Ok(pade_low(m, coeffs));
        }
    }
    let s = if norm > THETA[4] {
        (norm / THETA[4]).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale(0.5f64.powi(s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn solve_pade(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular inside the theta bound")
}

fn pade_low(a: &CMatrix, b: &[f64]) -> CMatrix {
    let n = a.nrows();
    let a2 = a * a;
    let mut even = CMatrix::identity(n, n).scale(b[0]);
    let mut odd = CMatrix::identity(n, n).scale(b[1]);
    let mut pow = CMatrix::identity(n, n);
    for k in (2..b.len()).step_by(2) {
        pow = &pow * &a2;
        even += pow.scale(b[k]);
        if k + 1 < b.len() {
            odd += pow.scale(b[k + 1]);
        }
    }
    solve_pade(a * odd, even)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let b = &PADE13;
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]);
    let u = a * (&a6 * inner_u + a6.scale(b[7]) + a4.scale(b[5]) + a2.scale(b[3]) + id.scale(b[1]));
    let inner_v = a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]);
    let v = &a6 * inner_v + a6.scale(b[6]) + a4.scale(b[4]) + a2.scale(b[2]) + id.scale(b[0]);
    solve_pade(u, v)
}

/// `M^k` by binary powering, `O(log k)` products.
pub fn matrix_power(m: &CMatrix, mut k: u64) -> Result<CMatrix> {
    check_square(m)?;
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}
