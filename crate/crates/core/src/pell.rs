//! Polynomial pairs attached to gap divisors and the defect-driven step
//! between them.
//!
//! A divisor `(y_j, delta_j)` determines a monic pair `(F, G)`: `G` has the
//! divisor points as roots, `F` is monic of band count degree with
//! subleading coefficient `-c_1` fixed by the endpoint trace, and
//! `F(y_j) = -delta_j s(y_j)` where `s` is the branch of `sqrt(H)`. The
//! defect `F^2 - H` factors as `L G G~` with a positive constant `L` and
//! the next divisor's polynomial `G~`; iterating this factorization walks
//! the divisor along a straight line on the torus. `L/4` is the total mass
//! of the divisor's spectral measure, and `L` also equals
//! `4 cap^2 prod phi(y_j)^{delta_j} / prod phi(y~_j)^{delta~_j}`.

use crate::divisor::GapDivisor;
use crate::equilibrium::EquilibriumData;
use crate::error::{consistency, domain, invalid, Error, Result};
use crate::geometry::{IntervalSystem, Region};
use crate::poly::Poly;
use crate::quad::GlRule;
use crate::series::c_series;
use crate::sysquad::band_integral_over_h;
use crate::torus::{circle_dist, wrap01};
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct PellPair {
    pub f: Poly,
    pub g: Poly,
}

/// Joint data of one defect step.
#[derive(Clone, Debug)]
pub struct PellCertificate {
    pub next: GapDivisor,
    pub l_const: f64,
    /// Relative coefficient residual of `F^2 - H - L G G~`.
    pub identity_residual: f64,
    /// `L` recomputed from the capacity and the exponential potentials.
    pub l_from_potentials: f64,
}

fn half_trace(sys: &IntervalSystem) -> f64 {
    sys.endpoints().iter().sum::<f64>() / 2.0
}

/// Monic pair `(F, G)` of a divisor. `G` vanishes on the divisor points;
/// `F` interpolates `-delta_j s(y_j)` there on top of the linear factor
/// that fixes its two leading coefficients.
pub fn divisor_to_pair(sys: &IntervalSystem, div: &GapDivisor) -> Result<PellPair> {
    let ys: Vec<f64> = div.points().iter().map(|p| p.0).collect();
    let g = Poly::from_roots(&ys);
    let lin = Poly::new(vec![ys.iter().sum::<f64>() - half_trace(sys), 1.0]);
    let mut f = lin.mul(&g);
    let gd = g.derivative();
    for &(y, delta) in div.points() {
        if delta == 0 {
            continue;
        }
        let s = sys.branch_value(y);
        let (quot, _) = g.div_rem(&Poly::new(vec![-y, 1.0]))?;
        f = f.sub(&quot.scale(delta as f64 * s / gd.eval(y)));
    }
    Ok(PellPair { f, g })
}

/// Factor the defect: `F^2 - H = L G G~`. Returns `(L, G~)` with `G~`
/// monic. The two leading coefficients of `F^2` and `H` cancel by the
/// trace normalization; anything else left over is reported, not hidden.
pub fn pell_defect(sys: &IntervalSystem, pair: &PellPair) -> Result<(f64, Poly)> {
    let (l_const, gnext, resid) = defect_core(sys, pair)?;
    if resid > 1e-8 {
        return Err(consistency("defect is not divisible by the divisor polynomial"));
    }
    Ok((l_const, gnext))
}

/// Same factorization without the divisibility gate; the relative division
/// remainder comes back as the third component, so callers working with
/// inexact pairs can judge it themselves.
pub(crate) fn defect_core(sys: &IntervalSystem, pair: &PellPair) -> Result<(f64, Poly, f64)> {
    let h = Poly::from_roots(sys.endpoints());
    let f2 = pair.f.mul(&pair.f);
    let scale = f2.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let d = f2.sub(&h);
    let top = 2 * sys.bands();
    for k in [top, top - 1] {
        if d.coeff(k).abs() > 1e-9 * scale {
            return Err(consistency(format!(
                "defect keeps a degree-{k} term; the pair is not trace-normalized"
            )));
        }
    }
    let dd = Poly::new((0..top - 1).map(|i| d.coeff(i)).collect());
    let (q, rem) = dd.div_rem(&pair.g)?;
    let remnorm = rem.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let l_const = q.leading();
    if !(l_const > 0.0) {
        return Err(consistency(format!("defect constant {l_const} is not positive")));
    }
    Ok((l_const, q.scale(1.0 / l_const), remnorm / scale))
}

/// One root of `q` per gap closure, by bisection; a root a hair outside a
/// gap is clamped onto the edge, anything farther is an inconsistency.
fn gap_roots(sys: &IntervalSystem, q: &Poly) -> Result<Vec<f64>> {
    let span = sys.span();
    let qd = q.derivative();
    let mut ys = Vec::with_capacity(sys.gaps());
    for j in 0..sys.gaps() {
        let (ga, gb) = sys.gap(j);
        let qa = q.eval(ga);
        let qb = q.eval(gb);
        let y = if qa == 0.0 {
            ga
        } else if qb == 0.0 {
            gb
        } else if qa.signum() != qb.signum() {
            let (mut lo, mut hi, mut flo) = (ga, gb, qa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = q.eval(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        } else {
            let (e, qe) = if qa.abs() <= qb.abs() { (ga, qa) } else { (gb, qb) };
            let slope = qd.eval(e);
            let step = if slope != 0.0 { -qe / slope } else { f64::INFINITY };
            if step.abs() <= 1e-7 * span {
                e
            } else {
                return Err(consistency(format!(
                    "step polynomial has no root in gap {j}"
                )));
            }
        };
        ys.push(y);
    }
    Ok(ys)
}

/// Divisor whose points are the gap roots of `pair.g`, with sheets read
/// off from `-F(y)/s(y)`; points on gap edges carry sheet 0.
pub fn pair_to_divisor(sys: &IntervalSystem, pair: &PellPair) -> Result<GapDivisor> {
    let ys = gap_roots(sys, &pair.g)?;
    sheet_divisor(sys, &pair.f, &ys, 1.0)
}

fn sheet_divisor(sys: &IntervalSystem, f: &Poly, ys: &[f64], sigma: f64) -> Result<GapDivisor> {
    let mut pts = Vec::with_capacity(ys.len());
    for (j, &y) in ys.iter().enumerate() {
        let (ga, gb) = sys.gap(j);
        let near_edge = (y - ga).min(gb - y) <= 1e-8 * (gb - ga);
        let delta: i8 = if near_edge {
            0
        } else {
            let ratio = sigma * (-f.eval(y) / sys.branch_value(y));
            let r = ratio.round();
            if (ratio - r).abs() > 0.2 || r.abs() != 1.0 {
                return Err(consistency(format!(
                    "sheet indicator {ratio} in gap {j} is not a sign"
                )));
            }
            r as i8
        };
        let snapped = if near_edge {
            if y - ga <= gb - y {
                ga
            } else {
                gb
            }
        } else {
            y
        };
        pts.push((snapped, delta));
    }
    GapDivisor::new(sys, pts)
}

/// Rotation-angle track of a divisor: `theta_k = (1/2) sum_j delta_j
/// omega_k(y_j)` on the circle, one coordinate per band. A point on a gap
/// edge contributes the half-indicator of the adjacent band regardless of
/// its stored sheet: both sheet limits agree there modulo one, which is
/// what makes the track continuous through edge crossings.
pub fn theta_track(eq: &EquilibriumData, div: &GapDivisor) -> Result<Vec<f64>> {
    let sys = &eq.sys;
    let l = sys.bands();
    let mut th = vec![0.0; l];
    for (j, &(y, delta)) in div.points().iter().enumerate() {
        let (ga, gb) = sys.gap(j);
        for (k, t) in th.iter_mut().enumerate() {
            let w = if y == ga {
                if k == j {
                    1.0
                } else {
                    0.0
                }
            } else if y == gb {
                if k == j + 1 {
                    1.0
                } else {
                    0.0
                }
            } else {
                delta as f64 * eq.harmonic_measure_one(k, y)
            };
            *t += 0.5 * w;
        }
    }
    Ok(th.into_iter().map(wrap01).collect())
}

/// Advance a divisor by one defect step. Returns the next divisor and the
/// defect constant `L`. The sheet signs of the new points are fixed by the
/// requirement that the rotation track steps by exactly `-omega(infinity)`.
pub fn pell_step(eq: &EquilibriumData, div: &GapDivisor) -> Result<(GapDivisor, f64)> {
    let sys = &eq.sys;
    let pair = divisor_to_pair(sys, div)?;
    let (l_const, gnext) = pell_defect(sys, &pair)?;
    let ys = gap_roots(sys, &gnext)?;
    let theta_old = theta_track(eq, div)?;
    let mut last: Option<Error> = None;
    for sigma in [-1.0, 1.0] {
        let cand = match sheet_divisor(sys, &pair.f, &ys, sigma) {
            Ok(c) => c,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let theta_new = theta_track(eq, &cand)?;
        let rotated = theta_new
            .iter()
            .zip(&theta_old)
            .zip(&eq.omega_inf)
            .all(|((tn, to), om)| circle_dist(*tn, wrap01(to - om)) < 1e-6);
        if rotated {
            return Ok((cand, l_const));
        }
        last = Some(consistency(format!(
            "candidate sheets (sign {sigma}) break the rotation law"
        )));
    }
    Err(last.unwrap_or_else(|| consistency("no sheet assignment fits the rotation law")))
}

/// Both verifiable identities of one step: the polynomial factorization
/// residual and the potential-theoretic value of `L`.
pub fn pell_certificate(eq: &EquilibriumData, div: &GapDivisor) -> Result<PellCertificate> {
    let sys = &eq.sys;
    let pair = divisor_to_pair(sys, div)?;
    let (next, l_const) = pell_step(eq, div)?;
    let ys_next: Vec<f64> = next.points().iter().map(|p| p.0).collect();
    let gnext = Poly::from_roots(&ys_next);
    let h = Poly::from_roots(sys.endpoints());
    let f2 = pair.f.mul(&pair.f);
    let resid = f2.sub(&h).sub(&pair.g.mul(&gnext).scale(l_const));
    let scale = f2.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let identity_residual =
        resid.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs())) / scale;
    let mut phi_ratio = 1.0;
    for &(y, d) in div.points() {
        phi_ratio *= eq.phi_abs(y).powi(d as i32);
    }
    for &(y, d) in next.points() {
        phi_ratio /= eq.phi_abs(y).powi(d as i32);
    }
    let l_from_potentials = 4.0 * eq.capacity * eq.capacity * phi_ratio;
    Ok(PellCertificate {
        next,
        l_const,
        identity_residual,
        l_from_potentials,
    })
}

/// `(F(x) - s(x)) / (2 G(x))`: the Markov transform of the divisor's
/// spectral measure, real off the bands.
pub fn markov_of_pair(sys: &IntervalSystem, pair: &PellPair, x: f64) -> Result<f64> {
    match sys.locate(x) {
        Region::Band(_) | Region::Endpoint(_) => {
            return Err(domain("Markov transform is complex on the bands"))
        }
        _ => {}
    }
    let g = pair.g.eval(x);
    if g == 0.0 {
        return Err(domain("pole of the Markov transform"));
    }
    Ok((pair.f.eval(x) - sys.branch_value(x)) / (2.0 * g))
}

/// Moment coordinates of a pair by band quadrature:
/// `A_j = (1/pi) int x^j G / h`, `B_j = (1/2pi) int x^j F / h`, j = 1..l-1.
pub fn tau_coords(
    sys: &IntervalSystem,
    pair: &PellPair,
    nodes_per_band: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes_per_band < 8 {
        return Err(invalid("need at least 8 nodes per band"));
    }
    let rule = GlRule::new(nodes_per_band);
    let l = sys.bands();
    let mut a = Vec::with_capacity(l - 1);
    let mut b = Vec::with_capacity(l - 1);
    for j in 1..l {
        let mut sa = 0.0;
        let mut sb = 0.0;
        for k in 0..l {
            sa += band_integral_over_h(sys, k, &rule, |x| x.powi(j as i32) * pair.g.eval(x));
            sb += band_integral_over_h(sys, k, &rule, |x| x.powi(j as i32) * pair.f.eval(x));
        }
        a.push(sa / PI);
        b.push(sb / (2.0 * PI));
    }
    Ok((a, b))
}

/// Same coordinates through the expansion of `1/sqrt(H)` at infinity:
/// `(1/pi) int_E x^m dx / h = c_{m-l+1}` (zero when the index is negative).
pub fn tau_exact(sys: &IntervalSystem, pair: &PellPair) -> (Vec<f64>, Vec<f64>) {
    let l = sys.bands();
    let c = c_series(sys, l + 2);
    let mom = |m: usize| -> f64 {
        if m + 1 < l {
            0.0
        } else {
            c[m + 1 - l]
        }
    };
    let mut a = Vec::with_capacity(l - 1);
    let mut b = Vec::with_capacity(l - 1);
    for j in 1..l {
        let sa: f64 = pair
            .g
            .coeffs()
            .iter()
            .enumerate()
            .map(|(m, gm)| gm * mom(j + m))
            .sum();
        let sb: f64 = pair
            .f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(m, fm)| fm * mom(j + m))
            .sum();
        a.push(sa);
        b.push(sb / 2.0);
    }
    (a, b)
}

/// Invert the moment coordinates: both coefficient chains are triangular
/// in the expansion coefficients, seeded by the trace normalization.
pub fn tau_inverse(sys: &IntervalSystem, a: &[f64], b: &[f64]) -> Result<PellPair> {
    let l = sys.bands();
    if a.len() != l - 1 || b.len() != l - 1 {
        return Err(invalid("need one moment per gap on each side"));
    }
    let c = c_series(sys, l + 2);
    let mut gc = vec![0.0; l];
    gc[l - 1] = 1.0;
    for j in 1..l {
        let mut acc = 0.0;
        for m in (l - j)..l {
            acc += gc[m] * c[j + m + 1 - l];
        }
        gc[l - 1 - j] = a[j - 1] - acc;
    }
    let mut fc = vec![0.0; l + 1];
    fc[l] = 1.0;
    fc[l - 1] = -c[1];
    for j in 1..l {
        let mut acc = 0.0;
        for m in (l - j)..=l {
            acc += fc[m] * c[j + m + 1 - l];
        }
        fc[l - 1 - j] = 2.0 * b[j - 1] - acc;
    }
    Ok(PellPair {
        f: Poly::new(fc),
        g: Poly::new(gc),
    })
}

/// Limits of the recurrence coefficients along one parity class for a
/// two-band system with divisor `(y, delta)`; closed forms in the first
/// two expansion coefficients.
pub fn two_interval_limits(sys: &IntervalSystem, y: f64, delta: i8) -> Result<(f64, f64)> {
    if sys.bands() != 2 {
        return Err(invalid("closed-form limits need exactly two bands"));
    }
    let div = GapDivisor::new(sys, vec![(y, delta)])?;
    let (y, delta) = div.points()[0];
    let c = c_series(sys, 3);
    let s = sys.branch_value(y);
    let alpha = c[1] - y;
    let lambda = (y * (c[1] - y) + c[2] - c[1] * c[1] - delta as f64 * s) / 2.0;
    Ok((alpha, lambda))
}
