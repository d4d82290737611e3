//! Logarithmic potential theory on a band system: the equilibrium measure,
//! its Green's function, capacity, and the harmonic measures of the bands.
//!
//! The density of the equilibrium measure is `r(x) / (pi h(x))` with `r`
//! the monic polynomial of degree l-1 whose integral against `1/sqrt(H)`
//! vanishes over every gap. Those l-1 gap conditions fix `r`; they also
//! make the Green's function vanish at both ends of every gap, so its gap
//! values can be taken as integrals anchored at either gap edge.

use crate::error::{invalid, numeric, Result};
use crate::geometry::{IntervalSystem, Region};
use crate::poly::Poly;
use crate::quad::GlRule;
use crate::series::{inv_sqrt_h_series, ratio_tail, tail_sum};
use crate::sysquad::{
    band_integral_over_h, gap_integral, gap_partial_integral, left_ray_integral,
    right_ray_integral,
};
use nalgebra::{DMatrix, DVector};

const SERIES_TERMS: usize = 32;

#[derive(Clone, Debug)]
pub struct EquilibriumData {
    pub sys: IntervalSystem,
    /// Monic numerator of the equilibrium density, degree l-1.
    pub r_inf: Poly,
    /// Zero of `r_inf` in each gap.
    pub gap_zeros: Vec<f64>,
    /// Harmonic-measure numerators, one per band, each of degree <= l-2.
    pub pi: Vec<Poly>,
    /// Band masses of the equilibrium measure (harmonic measure at infinity).
    pub omega_inf: Vec<f64>,
    /// Same quantities through the gap-side route; stored for cross-checks.
    pub omega_inf_dual: Vec<f64>,
    pub log_capacity: f64,
    pub capacity: f64,
    rule: GlRule,
    center: f64,
    x_cut: f64,
    /// Tail coefficients of `r_inf/sqrt(H)` in the centered variable.
    d_tail: Vec<f64>,
    /// Tail coefficients of each `pi_k/sqrt(H)`.
    pi_tails: Vec<Vec<f64>>,
}

/// Builds the equilibrium data. `nodes_per_band` controls every Gauss rule
/// involved; the integrands are analytic after substitution, so modest
/// counts already reach near machine accuracy.
pub fn equilibrium(sys: &IntervalSystem, nodes_per_band: usize) -> Result<EquilibriumData> {
    if nodes_per_band < 8 {
        return Err(invalid("need at least 8 quadrature nodes per band"));
    }
    let l = sys.bands();
    let g = sys.gaps();
    let rule = GlRule::new(nodes_per_band);

    // Moments of x^i over each gap against 1/sqrt(H).
    let moments = |i: usize, j: usize| gap_integral(sys, j, &rule, |x| x.powi(i as i32));
    let r_inf = if g == 0 {
        Poly::one()
    } else {
        let mut m = DMatrix::zeros(g, g);
        let mut rhs = DVector::zeros(g);
        for j in 0..g {
            for i in 0..g {
                m[(j, i)] = moments(i, j);
            }
            rhs[j] = -moments(g, j);
        }
        let lu = m.clone().lu();
        let beta = lu
            .solve(&rhs)
            .ok_or_else(|| numeric("gap moment system is singular"))?;
        let mut coeffs: Vec<f64> = beta.iter().copied().collect();
        coeffs.push(1.0);
        Poly::new(coeffs)
    };

    // One zero of r_inf per gap; the gap conditions force a sign change.
    let mut gap_zeros = Vec::with_capacity(g);
    for j in 0..g {
        let (ga, gb) = sys.gap(j);
        gap_zeros.push(bisect(&r_inf, ga, gb)?);
    }

    // Harmonic-measure numerators: deg <= l-2 with prescribed gap integrals.
    let mut pi = Vec::with_capacity(l);
    if g == 0 {
        pi.push(Poly::zero());
    } else {
        let mut m = DMatrix::zeros(g, g);
        for j in 0..g {
            for i in 0..g {
                m[(j, i)] = moments(i, j);
            }
        }
        let lu = m.lu();
        for k in 0..l {
            let mut rhs = DVector::zeros(g);
            for j in 0..g {
                let mut v = 0.0;
                if k == j + 1 {
                    v += 1.0;
                }
                if k == j {
                    v -= 1.0;
                }
                rhs[j] = v;
            }
            let beta = lu
                .solve(&rhs)
                .ok_or_else(|| numeric("gap moment system is singular"))?;
            pi.push(Poly::new(beta.iter().copied().collect()));
        }
    }

    // Band masses: integral of r_inf/(pi h) over each band.
    let mut omega_inf = Vec::with_capacity(l);
    for k in 0..l {
        let v = band_integral_over_h(sys, k, &rule, |x| r_inf.eval(x)) / std::f64::consts::PI;
        omega_inf.push(v);
    }

    // Series tails in the centered variable, cut at ten half-spans.
    let (lo, hi) = sys.hull();
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);
    let x_cut = center + 10.0 * radius;
    let c_cen = inv_sqrt_h_series(sys, center, SERIES_TERMS);
    let d_tail = ratio_tail(&r_inf.shift(center), &c_cen, l);
    let pi_tails: Vec<Vec<f64>> = pi.iter().map(|p| ratio_tail(&p.shift(center), &c_cen, l)).collect();

    // Dual route to the band masses: through the right ray.
    let mut omega_inf_dual = Vec::with_capacity(l);
    for k in 0..l {
        let base = if k == l - 1 { 1.0 } else { 0.0 };
        let pik = &pi[k];
        let ray = right_ray_integral(sys, x_cut, &rule, |x| pik.eval(x));
        let tail = tail_sum(&pi_tails[k], x_cut - center);
        omega_inf_dual.push(base + ray + tail);
    }

    // Capacity: g grows like log(t) - log(cap) + O(1/t); match at the cutoff.
    let g_cut = right_ray_integral(sys, x_cut, &rule, |x| r_inf.eval(x));
    let log_capacity = (x_cut - center).ln() - g_cut - tail_sum(&d_tail, x_cut - center);

    Ok(EquilibriumData {
        sys: sys.clone(),
        r_inf,
        gap_zeros,
        pi,
        omega_inf,
        omega_inf_dual,
        log_capacity,
        capacity: log_capacity.exp(),
        rule,
        center,
        x_cut,
        d_tail,
        pi_tails,
    })
}

fn bisect(p: &Poly, mut a: f64, mut b: f64) -> Result<f64> {
    let (mut fa, fb) = (p.eval(a), p.eval(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(numeric(format!(
            "no sign change in [{a}, {b}] while isolating a gap zero"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = p.eval(mid);
        if fm == 0.0 || (b - a) < 1e-16 * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

impl EquilibriumData {
    /// Green's function with pole at infinity; zero on the bands.
    pub fn green(&self, x: f64) -> f64 {
        let sys = &self.sys;
        match sys.locate(x) {
            Region::Band(_) | Region::Endpoint(_) => 0.0,
            Region::Gap(j) => {
                // Anchored at the left gap edge; the full-gap integral
                // vanishes, so either anchor gives the same value.
                gap_partial_integral(sys, j, x, &self.rule, |t| self.r_inf.eval(t))
            }
            Region::RightRay => {
                if x <= self.x_cut {
                    right_ray_integral(sys, x, &self.rule, |t| self.r_inf.eval(t))
                } else {
                    let t = x - self.center;
                    t.ln() - self.log_capacity - tail_sum(&self.d_tail, t)
                }
            }
            Region::LeftRay => {
                let x_far = 2.0 * self.center - self.x_cut;
                if x >= x_far {
                    -left_ray_integral(sys, x, &self.rule, |t| self.r_inf.eval(t))
                } else {
                    let t = x - self.center;
                    t.abs().ln() - self.log_capacity - tail_sum(&self.d_tail, t)
                }
            }
        }
    }

    /// `exp(green)`: the magnitude of the complex map that sends the domain
    /// exterior to the unit disk exterior.
    pub fn phi_abs(&self, x: f64) -> f64 {
        self.green(x).exp()
    }

    /// Harmonic measure of band k at the point x.
    pub fn harmonic_measure_one(&self, k: usize, x: f64) -> f64 {
        let sys = &self.sys;
        let l = sys.bands();
        match sys.locate(x) {
            Region::Band(b) => {
                if b == k {
                    1.0
                } else {
                    0.0
                }
            }
            Region::Endpoint(i) => {
                if i / 2 == k {
                    1.0
                } else {
                    0.0
                }
            }
            Region::Gap(j) => {
                let base = if k == j { 1.0 } else { 0.0 };
                base + gap_partial_integral(sys, j, x, &self.rule, |t| self.pi[k].eval(t))
            }
            Region::RightRay => {
                if x <= self.x_cut {
                    let base = if k == l - 1 { 1.0 } else { 0.0 };
                    base + right_ray_integral(sys, x, &self.rule, |t| self.pi[k].eval(t))
                } else {
                    self.omega_inf_dual[k] - tail_sum(&self.pi_tails[k], x - self.center)
                }
            }
            Region::LeftRay => {
                let x_far = 2.0 * self.center - self.x_cut;
                if x >= x_far {
                    let base = if k == 0 { 1.0 } else { 0.0 };
                    base - left_ray_integral(sys, x, &self.rule, |t| self.pi[k].eval(t))
                } else {
                    self.omega_inf_dual[k] - tail_sum(&self.pi_tails[k], x - self.center)
                }
            }
        }
    }

    /// All band harmonic measures at x.
    pub fn harmonic_measure(&self, x: f64) -> Vec<f64> {
        (0..self.sys.bands())
            .map(|k| self.harmonic_measure_one(k, x))
            .collect()
    }

    /// Equilibrium density at a band-interior point.
    pub fn density(&self, x: f64) -> Result<f64> {
        match self.sys.locate(x) {
            Region::Band(k) => {
                let (ba, bb) = self.sys.band(k);
                let habs = self.sys.band_abs_from_parts(k, x, x - ba, bb - x);
                Ok(self.sys.band_sign(k) * self.r_inf.eval(x) / (std::f64::consts::PI * habs))
            }
            _ => Err(invalid(format!("density wants a band-interior point, got {x}"))),
        }
    }

    /// Worst disagreement between the two routes to the band masses.
    pub fn omega_consistency(&self) -> f64 {
        self.omega_inf
            .iter()
            .zip(&self.omega_inf_dual)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

}
