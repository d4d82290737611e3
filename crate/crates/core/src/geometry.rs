//! Band-and-gap geometry on the real line and the fixed square-root branch
//! every other module agrees on.
//!
//! A system is a disjoint union of `l` closed bands
//! `E = [a_1,a_2] u ... u [a_{2l-1},a_{2l}]` with `H(x) = prod (x - a_i)`.
//! Off the bands the polynomial is positive; on band interiors it is
//! negative. The branch of `sqrt(H)` used throughout is positive right of
//! the last band and continued through the upper half plane, which makes
//! its sign alternate gap by gap: `(-1)^{l-m}` in the m-th gap (1-based)
//! and `(-1)^l` left of the first band. On a band interior the boundary
//! values from above/below are `+-i h(x)` with the real function
//! `h(x) = (-1)^{l-k} sqrt(|H(x)|)` on the k-th band.

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSystem {
    endpoints: Vec<f64>,
}

/// Where a real point sits relative to the bands. Indices are 0-based:
/// `Band(k)` is the (k+1)-th band, `Gap(j)` the gap between bands j and j+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    LeftRay,
    Band(usize),
    Gap(usize),
    RightRay,
    Endpoint(usize),
}

impl IntervalSystem {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        if endpoints.len() < 2 || endpoints.len() % 2 != 0 {
            return Err(invalid(format!(
                "need an even number (>= 2) of endpoints, got {}",
                endpoints.len()
            )));
        }
        if endpoints.iter().any(|a| !a.is_finite()) {
            return Err(invalid("endpoints must be finite"));
        }
        for w in endpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(invalid(format!(
                    "endpoints must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(IntervalSystem { endpoints })
    }

    /// Number of bands.
    pub fn bands(&self) -> usize {
        self.endpoints.len() / 2
    }

    /// Number of gaps (= genus of the associated surface).
    pub fn gaps(&self) -> usize {
        self.bands() - 1
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    /// Closed band k (0-based) as (left, right).
    pub fn band(&self, k: usize) -> (f64, f64) {
        (self.endpoints[2 * k], self.endpoints[2 * k + 1])
    }

    /// Open gap j (0-based) as (left, right).
    pub fn gap(&self, j: usize) -> (f64, f64) {
        (self.endpoints[2 * j + 1], self.endpoints[2 * j + 2])
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().unwrap())
    }

    pub fn span(&self) -> f64 {
        let (a, b) = self.hull();
        b - a
    }

    pub fn locate(&self, x: f64) -> Region {
        if let Some(i) = self.endpoints.iter().position(|a| *a == x) {
            return Region::Endpoint(i);
        }
        let ip = self.endpoints.partition_point(|a| *a < x);
        if ip == 0 {
            Region::LeftRay
        } else if ip == self.endpoints.len() {
            Region::RightRay
        } else if ip % 2 == 1 {
            Region::Band((ip - 1) / 2)
        } else {
            Region::Gap(ip / 2 - 1)
        }
    }

    /// `H(x) = prod_i (x - a_i)`.
    pub fn h_at(&self, x: f64) -> f64 {
        self.endpoints.iter().fold(1.0, |acc, a| acc * (x - a))
    }

    /// `prod_{i != skip_a, skip_b} |x - a_i|`; the positive smooth factor
    /// left after pulling a segment's own two roots out of `|H|`.
    pub fn rest_product_abs(&self, x: f64, skip_a: usize, skip_b: usize) -> f64 {
        let mut acc = 1.0;
        for (i, a) in self.endpoints.iter().enumerate() {
            if i != skip_a && i != skip_b {
                acc *= (x - a).abs();
            }
        }
        acc
    }

    /// Branch sign of `sqrt(H)` on gap j (0-based): `(-1)^{l-m}`, m = j+1.
    pub fn gap_sign(&self, j: usize) -> f64 {
        if (self.bands() - 1 - j) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign of `h` on band k (0-based): `(-1)^{l-k-1}` in 0-based k.
    pub fn band_sign(&self, k: usize) -> f64 {
        if (self.bands() - 1 - k) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The agreed real branch: signed `sqrt(H)` off the bands, `h` on band
    /// interiors, zero at endpoints.
    pub fn branch_value(&self, x: f64) -> f64 {
        match self.locate(x) {
            Region::Endpoint(_) => 0.0,
            Region::RightRay => self.h_at(x).sqrt(),
            Region::LeftRay => {
                let s = if self.bands() % 2 == 0 { 1.0 } else { -1.0 };
                s * self.h_at(x).sqrt()
            }
            Region::Gap(j) => self.gap_sign(j) * self.h_at(x).sqrt(),
            Region::Band(k) => self.band_sign(k) * (-self.h_at(x)).sqrt(),
        }
    }

    /// Signed `sqrt(H)` restricted to the gaps, in the cancellation-free
    /// form `sign * sqrt(dl * dr * rest)` with `dl = x - left`,
    /// `dr = right - x` supplied by the caller.
    pub fn gap_branch_from_parts(&self, j: usize, x: f64, dl: f64, dr: f64) -> f64 {
        let rest = self.rest_product_abs(x, 2 * j + 1, 2 * j + 2);
        self.gap_sign(j) * (dl * dr * rest).sqrt()
    }

    /// `|h|` on band k in cancellation-free form.
    pub fn band_abs_from_parts(&self, k: usize, x: f64, dl: f64, dr: f64) -> f64 {
        let rest = self.rest_product_abs(x, 2 * k, 2 * k + 1);
        (dl * dr * rest).sqrt()
    }
}
