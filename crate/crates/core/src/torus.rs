//! Small helpers for coordinates on the torus R^d / Z^d.

/// Representative in [0, 1).
pub fn wrap01(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Distance on the circle R/Z.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = wrap01(a - b);
    d.min(1.0 - d)
}

/// Max over coordinates of the circle distance.
pub fn torus_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| circle_dist(*x, *y))
        .fold(0.0, f64::max)
}

/// Signed representative in [-1/2, 1/2).
pub fn wrap_signed(x: f64) -> f64 {
    let w = wrap01(x);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}
