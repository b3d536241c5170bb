// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact `E[det(x − H) det(y − H)]` for the single-block ensemble (a GOE with
//! off-diagonal variance 1/W and diagonal variance 2/W).
//!
//! Householder reduction maps this GOE to a tridiagonal matrix with
//! independent entries: diagonal `N(0, 2/W)` and squared sub-diagonal
//! `χ²_{N−k}/W`. The leading principal minors `D_k` obey
//! `D_k = (x − a_k) D_{k−1} − b_{k−1}² D_{k−2}`, and because `a_k, b_{k−1}` are
//! independent of `D_{k−1}, D_{k−2}` the mixed second moments close on a
//! four-component linear recursion. No sampling and no eigensolver involved.

/// `ln E[det(x − H) det(y − H)]` and its sign, `H` of size `dim`, block size `w`.
pub fn goe_log_second_moment(dim: usize, w: f64, x: f64, y: f64) -> (f64, f64) {
    let var_a = 2.0 / w;
    // state after step k: p = E[D_k(x) D_k(y)], q = E[D_k(x) D_{k−1}(y)],
    // r = E[D_{k−1}(x) D_k(y)], s = E[D_{k−1}(x) D_{k−1}(y)]
    let mut p = x * y + var_a;
    let mut q = x;
    let mut r = y;
    let mut s = 1.0;
    let mut log_scale = 0.0;
    for k in 2..=dim {
        let nu = (dim - (k - 1)) as f64;
        let eb2 = nu / w;
        let eb4 = (nu * nu + 2.0 * nu) / (w * w);
        let p_next = (x * y + var_a) * p - x * eb2 * q - y * eb2 * r + eb4 * s;
        let q_next = x * p - eb2 * r;
        let r_next = y * p - eb2 * q;
        s = p;
        p = p_next;
        q = q_next;
        r = r_next;
        let scale = p.abs().max(q.abs()).max(r.abs()).max(s.abs());
        if scale > 0.0 {
            p /= scale;
            q /= scale;
            r /= scale;
            s /= scale;
            log_scale += scale.ln();
        }
    }
    (log_scale + p.abs().ln(), p.signum())
}

/// Exact finite-`N` ratio `F₂(E + δ, E − δ) / F₂(E, E)` with `δ = ξ / (2Nρ(E))`.
pub fn goe_exact_ratio(dim: usize, energy: f64, xi: f64) -> f64 {
    let rho = (4.0 - energy * energy).sqrt() / (2.0 * std::f64::consts::PI);
    let d = xi / (2.0 * dim as f64 * rho);
    let w = dim as f64;
    let (ln, sg) = goe_log_second_moment(dim, w, energy + d, energy - d);
    let (ln0, sg0) = goe_log_second_moment(dim, w, energy, energy);
    sg * sg0 * (ln - ln0).exp()
}
