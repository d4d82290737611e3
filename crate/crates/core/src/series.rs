//! Laurent-type expansions attached to a band system: the inverse and
//! direct square roots of `H` at infinity. These feed capacity tails,
//! moment recoveries, and the dual-route checks on period quantities.

use crate::geometry::IntervalSystem;
use crate::poly::{series_invsqrt, series_sqrt, Poly};

/// `1/sqrt(H(x)) = sum_{k>=0} c_k t^{-(l+k)}`, `t = x - center`, branch
/// positive for large positive `x`. Returns `(c_0 .. c_{n-1})`, `c_0 = 1`.
pub fn inv_sqrt_h_series(sys: &IntervalSystem, center: f64, n: usize) -> Vec<f64> {
    let s = shifted_root_product(sys, center);
    series_invsqrt(&s, n)
}

/// Raw-coordinate coefficients (`center = 0`): `1/sqrt(H) = sum c_k x^{-(l+k)}`.
pub fn c_series(sys: &IntervalSystem, n: usize) -> Vec<f64> {
    inv_sqrt_h_series(sys, 0.0, n)
}

/// Coefficients `h_j` of `sqrt(H*)(x) = sum h_j x^j` where
/// `H*(x) = x^{2l} H(1/x) = prod_j (1 - a_j x)`; `h_0 = 1` and
/// `h_1 = -(sum a_j)/2`.
pub fn sqrt_h_star_series(sys: &IntervalSystem, n: usize) -> Vec<f64> {
    let s = shifted_root_product(sys, 0.0);
    series_sqrt(&s, n)
}

/// `prod_j (1 - (a_j - center) u)` as ascending coefficients in `u`.
fn shifted_root_product(sys: &IntervalSystem, center: f64) -> Vec<f64> {
    let mut p = Poly::one();
    for &a in sys.endpoints() {
        p = p.mul(&Poly::new(vec![1.0, -(a - center)]));
    }
    let mut out = p.coeffs().to_vec();
    if out.is_empty() {
        out.push(1.0);
    }
    out
}

/// For a polynomial `f` of degree <= l-1 written in the centered variable
/// (`f_t(t) = f(t + center)`), returns `w` with
/// `f(x)/sqrt(H(x)) = sum_{m} w_m t^{-1-m}`; `w_m = 0` for
/// `m < l-1-deg f`.
pub fn ratio_tail(f_t: &Poly, c: &[f64], l: usize) -> Vec<f64> {
    let n = c.len();
    let mut w = vec![0.0; n];
    if f_t.is_zero() {
        return w;
    }
    let d = f_t.degree();
    assert!(d <= l - 1, "tail expansion needs deg f < l");
    for p in 0..=d {
        let fp = f_t.coeff(p);
        if fp == 0.0 {
            continue;
        }
        let base = l - 1 - p;
        for (k, ck) in c.iter().enumerate() {
            let m = base + k;
            if m < n {
                w[m] += fp * ck;
            }
        }
    }
    w
}

/// `sum_{m>=1} w_m t^{-m} / m`; `w[0]` is ignored. Used for capacity and
/// harmonic-measure tails beyond the quadrature cutoff.
pub fn tail_sum(w: &[f64], t: f64) -> f64 {
    let inv = 1.0 / t;
    let mut p = 1.0;
    let mut acc = 0.0;
    for (m, wm) in w.iter().enumerate().skip(1) {
        p *= inv;
        acc += wm * p / m as f64;
    }
    acc
}
