// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

/// `sign · e^{log_abs}`; the sign is 0 for an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSignValue {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSignValue {
    pub const ONE: Self = Self {
        log_abs: 0.0,
        sign: 1,
    };
    pub const ZERO: Self = Self {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                log_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        Self {
            log_abs: self.log_abs + other.log_abs,
            sign: self.sign * other.sign,
        }
    }

    /// `sign · e^{log_abs − offset}`.
    pub fn scaled(self, offset: f64) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * (self.log_abs - offset).exp()
        }
    }

    pub fn to_f64(self) -> f64 {
        self.scaled(0.0)
    }
}

/// `det(λ₁ − H) det(λ₂ − H)` from the spectrum of `H`.
///
/// Each eigenvalue contributes the single factor `(λ₁ − e)(λ₂ − e)`, so
/// swapping `λ₁` and `λ₂` gives a bit-identical result.
pub fn product_from_spectrum(eigenvalues: &[f64], lambda1: f64, lambda2: f64) -> LogSignValue {
    let mut log_abs = 0.0;
    let mut sign = 1i8;
    for &e in eigenvalues {
        let f = (lambda1 - e) * (lambda2 - e);
        if f == 0.0 {
            return LogSignValue::ZERO;
        }
        log_abs += f.abs().ln();
        if f < 0.0 {
            sign = -sign;
        }
    }
    LogSignValue { log_abs, sign }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_spectrum(h: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// `char_poly_product(H, λ₁, λ₂)`.
pub fn char_poly_product(h: &DMatrix<f64>, lambda1: f64, lambda2: f64) -> LogSignValue {
    product_from_spectrum(&symmetric_spectrum(h), lambda1, lambda2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Laplace expansion along the first row; independent of any factorization.
    fn cofactor_det(m: &DMatrix<f64>) -> f64 {
        let n = m.nrows();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|c| {
                let minor = m.clone().remove_row(0).remove_column(c);
                let s = if c % 2 == 0 { 1.0 } else { -1.0 };
                s * m[(0, c)] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn hand_cases() {
        let v = char_poly_product(&DMatrix::zeros(2, 2), 1.0, 1.0);
        assert_eq!(v, LogSignValue::ONE);
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let v = char_poly_product(&h, 2.0, 0.0);
        assert_eq!(v.sign, -1);
        assert!((v.to_f64() + 3.0).abs() < 1e-14);
        let v = char_poly_product(&h, 1.0, 5.0);
        assert_eq!(v, LogSignValue::ZERO);
        assert_eq!(v.to_f64(), 0.0);
    }

    #[test]
    fn matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let g = DMatrix::<f64>::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
            let h = &g + g.transpose();
            let (l1, l2) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let id = DMatrix::<f64>::identity(6, 6);
            let want = cofactor_det(&(&id * l1 - &h)) * cofactor_det(&(&id * l2 - &h));
            let got = char_poly_product(&h, l1, l2).to_f64();
            assert!(((got - want) / want).abs() < 1e-10, "got {got} want {want}");
        }
    }

    #[test]
    fn swap_is_exact() {
        let e = [-1.3, -0.2, 0.01, 0.7, 1.9];
        assert_eq!(
            product_from_spectrum(&e, 0.123, -0.456),
            product_from_spectrum(&e, -0.456, 0.123)
        );
    }

    #[test]
    fn composition() {
        let a = LogSignValue::from_f64(-2.5);
        let b = LogSignValue::from_f64(4.0);
        assert!((a.mul(b).to_f64() + 10.0).abs() < 1e-14);
        assert_eq!(a.mul(LogSignValue::ZERO), LogSignValue::ZERO);
        assert!((b.scaled(4f64.ln()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_overflow_at_large_dimension() {
        let e: Vec<f64> = (0..10_000)
            .map(|i| -2.0 + 4.0 * i as f64 / 10_000.0 + 1e-5)
            .collect();
        let v = product_from_spectrum(&e, 50.0, 60.0);
        assert!(v.log_abs.is_finite() && v.log_abs > 700.0);
        assert_eq!(v.sign, 1);
    }
}
