//! Period data of the hyperelliptic curve `w^2 = H(x)`: the normalized
//! differentials of the first kind, the (real, negative definite) period
//! matrix, the Abel map of gap divisors, and its inversion.
//!
//! Conventions, fixed once and used everywhere: the cycle around band
//! `E_j` is oriented so that the normalization reads
//! `int_{E_j} e_k / h dx = -pi delta_{jk}` for `j, k = 1..l-1`, and the
//! period matrix is `B_{jk} = 2 sum_{m >= j} int_{gap_m} e_k / sqrt(H) dx`
//! with the signed gap branch. With these choices `B` is symmetric and
//! negative definite, and the differentials recombine the harmonic-measure
//! numerators as `e_k = -(1/2) sum_m B_{km} pi_m`.

use crate::divisor::GapDivisor;
use crate::equilibrium::EquilibriumData;
use crate::error::{invalid, numeric, Error, Result};
use crate::geometry::IntervalSystem;
use crate::poly::Poly;
use crate::quad::GlRule;
use crate::sysquad::{band_integral_over_h, gap_theta_integral};
use crate::torus::{circle_dist, wrap01, wrap_signed};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct RiemannData {
    pub sys: IntervalSystem,
    /// Numerators of the normalized differentials, degree <= l-2 each.
    pub e: Vec<Poly>,
    /// Period matrix, symmetric negative definite, (l-1) x (l-1).
    pub b: DMatrix<f64>,
    b_inv: DMatrix<f64>,
    rule: GlRule,
}

/// How far the relative asymmetry of the computed period matrix may go
/// before construction refuses to symmetrize it silently.
const SYMMETRY_TOL: f64 = 1e-8;

pub fn riemann_data(sys: &IntervalSystem, nodes_per_band: usize) -> Result<RiemannData> {
    if sys.gaps() == 0 {
        return Err(invalid("period data needs at least two bands"));
    }
    if nodes_per_band < 8 {
        return Err(invalid("need at least 8 quadrature nodes per band"));
    }
    let g = sys.gaps();
    let rule = GlRule::new(nodes_per_band);

    // Normalization: int_{E_j} x^i / h dx for the first l-1 bands.
    let mut n = DMatrix::zeros(g, g);
    for j in 0..g {
        for i in 0..g {
            n[(j, i)] = band_integral_over_h(sys, j, &rule, |x| x.powi(i as i32));
        }
    }
    let lu = n.lu();
    let mut e = Vec::with_capacity(g);
    for k in 0..g {
        let mut rhs = DVector::zeros(g);
        rhs[k] = -std::f64::consts::PI;
        let coef = lu
            .solve(&rhs)
            .ok_or_else(|| numeric("band normalization system is singular"))?;
        e.push(Poly::new(coef.iter().copied().collect()));
    }

    // Period matrix from gap integrals.
    let mut gap_ints = DMatrix::zeros(g, g); // [m][k] = int_{gap_m} e_k / sqrt(H)
    for m in 0..g {
        for k in 0..g {
            let ek = &e[k];
            gap_ints[(m, k)] =
                gap_theta_integral(sys, m, std::f64::consts::PI, &rule, |x| ek.eval(x));
        }
    }
    let mut b = DMatrix::zeros(g, g);
    for j in 0..g {
        for k in 0..g {
            let mut acc = 0.0;
            for m in j..g {
                acc += gap_ints[(m, k)];
            }
            b[(j, k)] = 2.0 * acc;
        }
    }
    let scale = b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let asym = (&b - b.transpose()).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Consistency(format!(
            "period matrix asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e} of scale {scale:.3e}"
        )));
    }
    let b = (&b + b.transpose()) * 0.5;

    // Negative definiteness is part of the orientation contract.
    if nalgebra::Cholesky::new(-b.clone()).is_none() {
        return Err(Error::Consistency(
            "period matrix is not negative definite".into(),
        ));
    }
    let b_inv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| numeric("period matrix is singular"))?;

    Ok(RiemannData {
        sys: sys.clone(),
        e,
        b,
        b_inv,
        rule,
    })
}

impl RiemannData {
    /// Abel sums `v_k = sum_j delta_j int_{a_{2j}}^{y_j} e_k / sqrt(H) dx`,
    /// each gap integral anchored at its left edge.
    pub fn abel_map(&self, div: &GapDivisor) -> Result<Vec<f64>> {
        if div.len() != self.sys.gaps() {
            return Err(invalid("divisor size does not match the system"));
        }
        let g = self.sys.gaps();
        let mut v = vec![0.0; g];
        for j in 0..g {
            let delta = div.delta(j) as f64;
            if delta == 0.0 {
                // Left edge contributes nothing; right edge contributes the
                // full-gap integral on either sheet. Pick the limit from the
                // +1 sheet; mod the lattice this is immaterial for closed
                // loops but keeps the map single-valued on edges.
                let (ga, gb) = self.sys.gap(j);
                if div.y(j) == gb {
                    for (k, ek) in self.e.iter().enumerate() {
                        v[k] += gap_theta_integral(
                            &self.sys,
                            j,
                            std::f64::consts::PI,
                            &self.rule,
                            |x| ek.eval(x),
                        );
                    }
                } else {
                    let _ = ga;
                }
                continue;
            }
            let theta = crate::quad::segment_angle(
                self.sys.gap(j).0,
                self.sys.gap(j).1,
                div.y(j),
            );
            for (k, ek) in self.e.iter().enumerate() {
                v[k] += delta
                    * gap_theta_integral(&self.sys, j, theta, &self.rule, |x| ek.eval(x));
            }
        }
        Ok(v)
    }

    /// Torus coordinates `t = B^{-1} v mod 1`.
    pub fn torus_coords(&self, v: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(v);
        let t = &self.b_inv * v;
        t.iter().map(|x| wrap01(*x)).collect()
    }

    pub fn torus_coords_of(&self, div: &GapDivisor) -> Result<Vec<f64>> {
        Ok(self.torus_coords(&self.abel_map(div)?))
    }

    /// The same torus point computed from harmonic measures alone:
    /// `t_k = (1/2) sum_j delta_j (delta_{kj} - w_k(y_j)) mod 1`.
    /// Agreement with `torus_coords_of` is the cross-check that ties the
    /// period conventions to the potential theory.
    pub fn torus_coords_from_measures(
        &self,
        eq: &EquilibriumData,
        div: &GapDivisor,
    ) -> Result<Vec<f64>> {
        if div.len() != self.sys.gaps() {
            return Err(invalid("divisor size does not match the system"));
        }
        let g = self.sys.gaps();
        let mut t = vec![0.0; g];
        for (k, tk) in t.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..g {
                let delta = div.delta(j) as f64;
                if delta == 0.0 {
                    // Edge limit of delta * (delta_{kj} - w_k): at the left
                    // edge w_k = delta_{kj} exactly; at the right edge the
                    // +-1/2 ambiguity is invisible mod 1. Use the half-turn
                    // convention at the right edge for continuity.
                    let (_, gb) = self.sys.gap(j);
                    if div.y(j) == gb {
                        let kron_next = if k == j + 1 { 1.0 } else { 0.0 };
                        acc += kron_next;
                    }
                    continue;
                }
                let kron = if k == j { 1.0 } else { 0.0 };
                acc += delta * (kron - eq.harmonic_measure_one(k, div.y(j)));
            }
            *tk = wrap01(0.5 * acc);
        }
        Ok(t)
    }

    /// Max circle distance between the Abel-map route and the
    /// harmonic-measure route to the torus coordinates.
    pub fn abel_consistency(&self, eq: &EquilibriumData, div: &GapDivisor) -> Result<f64> {
        let ta = self.torus_coords_of(div)?;
        let th = self.torus_coords_from_measures(eq, div)?;
        Ok(ta
            .iter()
            .zip(&th)
            .map(|(a, b)| circle_dist(*a, *b))
            .fold(0.0, f64::max))
    }

    /// Continuous angle parametrization of a gap point:
    /// `y = ga + (gb - ga) sin^2(pi theta)`, sheet +1 for theta in (0, 1/2),
    /// sheet -1 for theta in (1/2, 1).
    fn point_from_angle(&self, j: usize, theta: f64) -> (f64, i8) {
        let (ga, gb) = self.sys.gap(j);
        let th = wrap01(theta);
        let y = ga + (gb - ga) * (std::f64::consts::PI * th).sin().powi(2);
        let delta = if th < 0.5 { 1 } else { -1 };
        (y, delta)
    }

    /// Lifted Abel sums along the angle parametrization; smooth in theta.
    fn lifted_v(&self, thetas: &[f64]) -> Vec<f64> {
        let g = self.sys.gaps();
        let mut v = vec![0.0; g];
        for (j, &thj) in thetas.iter().enumerate() {
            let th = wrap01(thj);
            for (k, ek) in self.e.iter().enumerate() {
                if th <= 0.5 {
                    v[k] += gap_theta_integral(
                        &self.sys,
                        j,
                        2.0 * std::f64::consts::PI * th,
                        &self.rule,
                        |x| ek.eval(x),
                    );
                } else {
                    let full = gap_theta_integral(
                        &self.sys,
                        j,
                        std::f64::consts::PI,
                        &self.rule,
                        |x| ek.eval(x),
                    );
                    let part = gap_theta_integral(
                        &self.sys,
                        j,
                        2.0 * std::f64::consts::PI * (1.0 - th),
                        &self.rule,
                        |x| ek.eval(x),
                    );
                    v[k] += 2.0 * full - part;
                }
            }
        }
        v
    }

    /// `d v_k / d theta_j`, smooth across the gap edges:
    /// `sign_j * 2 pi * e_k(y_j) / sqrt(rest_j(y_j))`.
    fn lifted_jacobian(&self, thetas: &[f64]) -> DMatrix<f64> {
        let g = self.sys.gaps();
        let mut m = DMatrix::zeros(g, g);
        for (j, &thj) in thetas.iter().enumerate() {
            let (y, _) = self.point_from_angle(j, thj);
            let rest = self.sys.rest_product_abs(y, 2 * j + 1, 2 * j + 2);
            let factor = self.sys.gap_sign(j) * 2.0 * std::f64::consts::PI / rest.sqrt();
            for k in 0..g {
                m[(k, j)] = factor * self.e[k].eval(y);
            }
        }
        m
    }

    /// Inverts the torus map: finds the gap divisor whose coordinates are
    /// `t`. Damped Newton on the angle parametrization with a coarse
    /// multistart; errs if no start converges.
    pub fn jacobi_invert(&self, t: &[f64]) -> Result<GapDivisor> {
        let g = self.sys.gaps();
        if t.len() != g {
            return Err(invalid("coordinate count does not match the genus"));
        }
        let residual = |thetas: &[f64]| -> DVector<f64> {
            let v = self.lifted_v(thetas);
            let tv = self.torus_coords(&v);
            DVector::from_iterator(g, tv.iter().zip(t).map(|(a, b)| wrap_signed(a - b)))
        };
        let grid = if g == 1 { 24usize } else { 12 };
        let mut starts: Vec<(f64, Vec<f64>)> = Vec::new();
        let mut idx = vec![0usize; g];
        loop {
            let th: Vec<f64> = idx.iter().map(|i| (*i as f64 + 0.5) / grid as f64).collect();
            let r = residual(&th);
            starts.push((r.amax(), th));
            let mut carry = true;
            for d in idx.iter_mut() {
                *d += 1;
                if *d < grid {
                    carry = false;
                    break;
                }
                *d = 0;
            }
            if carry {
                break;
            }
        }
        starts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, start) in starts.iter().take(12) {
            if let Some(thetas) = self.newton_from(start, &residual) {
                let pts: Vec<(f64, i8)> = (0..g)
                    .map(|j| self.point_from_angle(j, thetas[j]))
                    .collect();
                // Edge snapping happens inside the divisor constructor; the
                // sheet sign must be zeroed there for edge hits.
                let snapped: Vec<(f64, i8)> = pts
                    .iter()
                    .enumerate()
                    .map(|(j, &(y, d))| {
                        let (ga, gb) = self.sys.gap(j);
                        let snap = 1e-9 * (gb - ga);
                        if (y - ga).abs() <= snap || (y - gb).abs() <= snap {
                            (y, 0)
                        } else {
                            (y, d)
                        }
                    })
                    .collect();
                let div = GapDivisor::new(&self.sys, snapped)?;
                // Guard: the found divisor must really map to t.
                let check = self.torus_coords_of(&div)?;
                let err = check
                    .iter()
                    .zip(t)
                    .map(|(a, b)| circle_dist(*a, *b))
                    .fold(0.0, f64::max);
                if err < 1e-8 {
                    return Ok(div);
                }
            }
        }
        Err(numeric("torus inversion did not converge from any start"))
    }

    fn newton_from<F: Fn(&[f64]) -> DVector<f64>>(
        &self,
        start: &[f64],
        residual: &F,
    ) -> Option<Vec<f64>> {
        let mut th = start.to_vec();
        let mut r = residual(&th);
        for _ in 0..60 {
            if r.amax() < 1e-13 {
                return Some(th);
            }
            let j = &self.b_inv * self.lifted_jacobian(&th);
            let step = j.lu().solve(&r)?;
            // Damped update, capped so one iteration cannot jump sheets.
            let mut best: Option<(f64, Vec<f64>, DVector<f64>)> = None;
            for damp in [1.0, 0.5, 0.25, 0.1] {
                let cand: Vec<f64> = th
                    .iter()
                    .zip(step.iter())
                    .map(|(a, s)| wrap01(a - damp * s.clamp(-0.2, 0.2)))
                    .collect();
                let rc = residual(&cand);
                if rc.amax() < r.amax() {
                    best = Some((rc.amax(), cand, rc));
                    break;
                }
                if best.as_ref().is_none_or(|(b, _, _)| rc.amax() < *b) {
                    best = Some((rc.amax(), cand, rc));
                }
            }
            let (_, cand, rc) = best?;
            th = cand;
            r = rc;
        }
        if r.amax() < 1e-11 {
            Some(th)
        } else {
            None
        }
    }

    pub fn quadrature_rule(&self) -> &GlRule {
        &self.rule
    }

    pub fn b_inverse(&self) -> &DMatrix<f64> {
        &self.b_inv
    }
}
