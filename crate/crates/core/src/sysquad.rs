//! Quadrature over a band system with the square-root branch built in.
//! Band and gap integrals use the cosine substitution, which turns
//! `dx / sqrt(H)` into a smooth d-theta form; the edge singularities never
//! appear numerically. Ray integrals use a square-root substitution
//! anchored at the outer endpoint.

use crate::geometry::IntervalSystem;
use crate::quad::{cosine_segment_partial, segment_angle, GlRule};

/// `int over gap j, from the left gap edge to x, of f/sqrt(H) dt` with the
/// signed branch. `x` must lie in the closed gap; `x` at the right edge
/// gives the full-gap integral.
pub fn gap_partial_integral<F: Fn(f64) -> f64>(
    sys: &IntervalSystem,
    j: usize,
    x: f64,
    rule: &GlRule,
    f: F,
) -> f64 {
    let (ga, gb) = sys.gap(j);
    let theta = segment_angle(ga, gb, x);
    gap_theta_integral(sys, j, theta, rule, f)
}

/// Same integral parametrized by the angle: `x = ga + (gb-ga) sin^2(theta/2)`.
pub fn gap_theta_integral<F: Fn(f64) -> f64>(
    sys: &IntervalSystem,
    j: usize,
    theta_max: f64,
    rule: &GlRule,
    f: F,
) -> f64 {
    if theta_max <= 0.0 {
        return 0.0;
    }
    let (ga, gb) = sys.gap(j);
    let seg = cosine_segment_partial(ga, gb, theta_max, rule);
    let sign = sys.gap_sign(j);
    let mut acc = 0.0;
    for i in 0..seg.x.len() {
        let rest = sys.rest_product_abs(seg.x[i], 2 * j + 1, 2 * j + 2);
        acc += seg.w[i] * f(seg.x[i]) / rest.sqrt();
    }
    sign * acc
}

/// Full-gap integral of `f/sqrt(H)` (signed branch).
pub fn gap_integral<F: Fn(f64) -> f64>(sys: &IntervalSystem, j: usize, rule: &GlRule, f: F) -> f64 {
    gap_theta_integral(sys, j, std::f64::consts::PI, rule, f)
}

/// `int over band k of f/h dx` where `h` is the signed real boundary value.
pub fn band_integral_over_h<F: Fn(f64) -> f64>(
    sys: &IntervalSystem,
    k: usize,
    rule: &GlRule,
    f: F,
) -> f64 {
    let (ba, bb) = sys.band(k);
    let seg = cosine_segment_partial(ba, bb, std::f64::consts::PI, rule);
    let sign = sys.band_sign(k);
    let mut acc = 0.0;
    for i in 0..seg.x.len() {
        let rest = sys.rest_product_abs(seg.x[i], 2 * k, 2 * k + 1);
        acc += seg.w[i] * f(seg.x[i]) / rest.sqrt();
    }
    sign * acc
}

/// `int_{a_last}^{x_hi} f/sqrt(H) dt` on the right ray (branch positive).
/// Substitution `t = a_last + (x_hi - a_last) u^2` absorbs the edge root.
pub fn right_ray_integral<F: Fn(f64) -> f64>(
    sys: &IntervalSystem,
    x_hi: f64,
    rule: &GlRule,
    f: F,
) -> f64 {
    let a_last = *sys.endpoints().last().unwrap();
    debug_assert!(x_hi >= a_last);
    let width = x_hi - a_last;
    if width <= 0.0 {
        return 0.0;
    }
    let last = sys.endpoints().len() - 1;
    let mut acc = 0.0;
    for (u0, w) in rule.nodes.iter().zip(&rule.weights) {
        let u = 0.5 * (u0 + 1.0);
        let t = a_last + width * u * u;
        let rest = sys.rest_product_abs(t, last, last);
        acc += 0.5 * w * f(t) / rest.sqrt();
    }
    2.0 * width.sqrt() * acc
}

/// `int_{x_lo}^{a_first} f/sqrt(H) dt` on the left ray (signed branch).
pub fn left_ray_integral<F: Fn(f64) -> f64>(
    sys: &IntervalSystem,
    x_lo: f64,
    rule: &GlRule,
    f: F,
) -> f64 {
    let a_first = sys.endpoints()[0];
    debug_assert!(x_lo <= a_first);
    let width = a_first - x_lo;
    if width <= 0.0 {
        return 0.0;
    }
    let sign = if sys.bands() % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    for (u0, w) in rule.nodes.iter().zip(&rule.weights) {
        let u = 0.5 * (u0 + 1.0);
        let t = a_first - width * u * u;
        let rest = sys.rest_product_abs(t, 0, 0);
        acc += 0.5 * w * f(t) / rest.sqrt();
    }
    sign * 2.0 * width.sqrt() * acc
}
