//! Dense real polynomials with ascending coefficient storage, plus the
//! handful of formal power-series kernels the rest of the crate leans on.

use crate::error::{invalid, Result};

/// Real polynomial, coefficients ascending: `coeffs[k]` multiplies `x^k`.
/// The zero polynomial is stored as an empty vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1.0] }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, 1.0]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let d: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        Poly::new(d)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) + other.coeff(k);
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: returns `(q, r)` with `self = q*d + r`,
    /// `deg r < deg d`. Errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(invalid("polynomial division by zero"));
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.leading();
        if rem.len() <= dd {
            return Ok((Poly::zero(), Poly::new(rem)));
        }
        let mut q = vec![0.0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let factor = rem[k] / lead;
            q[k - dd] = factor;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] -= factor * dc;
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(q), Poly::new(rem)))
    }

    /// Recenters the variable: returns `p` with `p(t) = self(t + x0)`.
    pub fn shift(&self, x0: f64) -> Poly {
        // Horner in the shifted variable: repeatedly multiply by (t + x0).
        let mut out = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            out = out.mul(&Poly::new(vec![x0, 1.0]));
            out = out.add(&Poly::constant(c));
        }
        out
    }
}

/// Truncated product of two power series given by ascending coefficients;
/// the result carries `n` terms.
pub fn series_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `s(u)^{-1/2}` for a series with `s[0] = 1`.
/// From `2 s c' + s' c = 0`:
///   `c_{k+1} = -(1/(2(k+1))) * sum_{i>=1} (2(k+1) - i) s_i c_{k+1-i}`.
pub fn series_invsqrt(s: &[f64], n: usize) -> Vec<f64> {
    assert!((s[0] - 1.0).abs() < 1e-14, "series must start at 1");
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    for k1 in 1..n {
        let mut acc = 0.0;
        for i in 1..=k1.min(s.len() - 1) {
            acc += (2.0 * k1 as f64 - i as f64) * s[i] * c[k1 - i];
        }
        c[k1] = -acc / (2.0 * k1 as f64);
    }
    c
}

/// Coefficients of `s(u)^{1/2}` for a series with `s[0] = 1`:
///   `c_k = (s_k - sum_{i=1}^{k-1} c_i c_{k-i}) / 2`.
pub fn series_sqrt(s: &[f64], n: usize) -> Vec<f64> {
    assert!((s[0] - 1.0).abs() < 1e-14, "series must start at 1");
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    for k in 1..n {
        let sk = s.get(k).copied().unwrap_or(0.0);
        let mut acc = 0.0;
        for i in 1..k {
            acc += c[i] * c[k - i];
        }
        c[k] = (sk - acc) / 2.0;
    }
    c
}
