//! Recurrence coefficients and the polynomial/second-kind apparatus of a
//! discretized measure.
//!
//! Conventions: `alpha[i]`, `lambda[i]` store the 1-based coefficients
//! `alpha_{i+1}`, `lambda_{i+1}`; `lambda_1` is the total mass. Orthonormal
//! polynomials satisfy
//! `P_{n+1} = ((x - alpha_{n+1}) P_n - sqrt(lambda_{n+1}) P_{n-1}) / sqrt(lambda_{n+2})`
//! with `P_{-1} = 0`, `P_0 = 1/sqrt(lambda_1)`; the monic family obeys
//! `p_n = (x - alpha_n) p_{n-1} - lambda_n p_{n-2}` and
//! `||p_n||^2 = prod_{i<=n+1} lambda_i`. Second-kind transforms
//! `Q_n(z) = int P_n(x) dmu(x) / (z - x)` obey the same recurrence with the
//! seed `Q_{-1} = 1`, which absorbs the inhomogeneity at n = 0.

use crate::error::{consistency, invalid, numeric, Result};
use crate::measure::DiscreteMeasure;

#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// 1-based accessors matching the classical indexing.
    pub fn alpha_n(&self, n: usize) -> f64 {
        self.alpha[n - 1]
    }

    pub fn lambda_n(&self, n: usize) -> f64 {
        self.lambda[n - 1]
    }

    /// Drops the first `m` coefficients: the table of the m-times stripped
    /// measure. Its leading `lambda` slot again holds that measure's mass.
    pub fn strip(&self, m: usize) -> Result<RecurrenceTable> {
        if m >= self.len() {
            return Err(invalid("cannot strip past the end of the table"));
        }
        Ok(RecurrenceTable {
            alpha: self.alpha[m..].to_vec(),
            lambda: self.lambda[m..].to_vec(),
        })
    }
}

/// Stieltjes procedure with full reorthogonalization (two passes) on the
/// weighted node vectors. Returns `n` coefficient pairs. The node count
/// must comfortably exceed the requested length; a quarter is the usual
/// safe bound for discretized absolutely continuous measures.
pub fn stieltjes(dm: &DiscreteMeasure, n: usize) -> Result<RecurrenceTable> {
    let m = dm.len();
    if n == 0 {
        return Err(invalid("requesting an empty recurrence table"));
    }
    if 4 * n > m {
        return Err(invalid(format!(
            "table of length {n} wants at least {} nodes, got {m}",
            4 * n
        )));
    }
    let mass: f64 = dm.weights.iter().sum();
    if !(mass > 0.0) {
        return Err(invalid("measure has no mass"));
    }
    let sqrt_w: Vec<f64> = dm.weights.iter().map(|w| w.sqrt()).collect();
    let x = &dm.nodes;

    let mut alpha = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    lambda.push(mass);

    // u_k = sqrt(w) .* P_k(x), orthonormal in the Euclidean sense.
    let mut u_prev = vec![0.0; m];
    let mut u_cur: Vec<f64> = sqrt_w.iter().map(|s| s / mass.sqrt()).collect();
    let mut basis: Vec<Vec<f64>> = vec![u_cur.clone()];

    for k in 0..n {
        let a: f64 = u_cur.iter().zip(x).map(|(u, xi)| u * u * xi).sum();
        alpha.push(a);
        if k + 1 == n {
            break;
        }
        let sql_prev = if k == 0 { 0.0 } else { lambda[k].sqrt() };
        let mut r: Vec<f64> = (0..m)
            .map(|i| (x[i] - a) * u_cur[i] - sql_prev * u_prev[i])
            .collect();
        // Full reorthogonalization, twice.
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = r.iter().zip(b).map(|(ri, bi)| ri * bi).sum();
                for i in 0..m {
                    r[i] -= c * b[i];
                }
            }
        }
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-150) {
            return Err(numeric(format!(
                "recurrence breakdown at step {k}: residual norm {norm:.3e}"
            )));
        }
        lambda.push(norm * norm);
        for v in r.iter_mut() {
            *v /= norm;
        }
        u_prev = std::mem::replace(&mut u_cur, r);
        basis.push(u_cur.clone());
    }
    Ok(RecurrenceTable { alpha, lambda })
}

/// `P_0(x) .. P_{n_max}(x)`; needs `alpha_1..alpha_{n_max}` and
/// `lambda_1..lambda_{n_max+1}`.
pub fn orthonormal_values(rt: &RecurrenceTable, n_max: usize, x: f64) -> Result<Vec<f64>> {
    if rt.len() < n_max + 1 {
        return Err(invalid(format!(
            "table too short for P_{n_max}: have {}",
            rt.len()
        )));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0 / rt.lambda[0].sqrt();
    out.push(cur);
    for k in 0..n_max {
        let sql_k1 = if k == 0 { 0.0 } else { rt.lambda[k].sqrt() };
        let next = ((x - rt.alpha[k]) * cur - sql_k1 * prev) / rt.lambda[k + 1].sqrt();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Monic values `p_0(x) .. p_{n_max}(x)`.
pub fn monic_values(rt: &RecurrenceTable, n_max: usize, x: f64) -> Result<Vec<f64>> {
    if rt.len() < n_max {
        return Err(invalid("table too short for the requested monic degree"));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur);
    for n in 1..=n_max {
        let lam = if n == 1 { 0.0 } else { rt.lambda[n - 1] };
        let next = (x - rt.alpha[n - 1]) * cur - lam * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Markov transform `m(z) = int dmu / (z - x)` by direct summation.
pub fn markov_value(dm: &DiscreteMeasure, z: f64) -> f64 {
    dm.nodes
        .iter()
        .zip(&dm.weights)
        .map(|(x, w)| w / (z - x))
        .sum()
}

/// Second-kind values `Q_0(z) .. Q_{n_max}(z)` for real `z` off the nodes.
///
/// `Q_n` is the minimal solution of the three-term recurrence, so upward
/// recursion is useless past a few steps. The values solve the tridiagonal
/// system `(z - J) q = sqrt(lambda_1) e_0` truncated by a zero entry deep
/// in the table: the n = 0 inhomogeneity `Q_{-1} = 1` plus minimality. The
/// solve runs as a backward sweep over infinity-normalized direction
/// triples `(q_{m+1}, q_m, q_{m-1})`, dividing only by off-diagonal
/// entries, which never vanish. That keeps every entry relatively accurate
/// down to the exponentially small tail (a generic pivoted solve would
/// smear absolute-size noise into it) and survives the even/odd decoupling
/// of the recurrence at symmetry points, where single entries vanish
/// exactly and scalar-seeded backward recursion silently loses a parity
/// chain. Truncations at two depths must agree, otherwise the call reports
/// a numeric failure instead of noise.
pub fn weyl_values(rt: &RecurrenceTable, n_max: usize, z: f64) -> Result<Vec<f64>> {
    if rt.len() < n_max + 2 {
        return Err(invalid("table too short for the requested transform order"));
    }
    let buffer = rt.len() - (n_max + 2);
    if buffer < 40 {
        return Err(invalid(format!(
            "need at least 40 spare table entries as a truncation buffer, have {buffer}"
        )));
    }
    // Row m reads o[m-1] q_{m-1} + d[m] q_m + o[m] q_{m+1} = b_m with
    // b_0 = sqrt(lambda_1) and b_m = 0 for m >= 1.
    let d: Vec<f64> = rt.alpha.iter().map(|a| z - a).collect();
    let o: Vec<f64> = rt.lambda[1..].iter().map(|l| -l.sqrt()).collect();
    let b0 = rt.lambda[0].sqrt();
    let solve = |top: usize| -> Result<Vec<f64>> {
        let norm3 = |v: [f64; 3]| -> [f64; 3] {
            let s = v[0].abs().max(v[1].abs()).max(v[2].abs());
            [v[0] / s, v[1] / s, v[2] / s]
        };
        let mut t = vec![[0.0f64; 3]; top + 1];
        t[top] = norm3([0.0, 1.0, -d[top] / o[top - 1]]);
        for j in (1..top).rev() {
            let [_, v, w] = t[j + 1];
            t[j] = norm3([v, w, -(d[j] * w + o[j] * v) / o[j - 1]]);
        }
        // Anchor the scale with row 0. Its right side is nonzero, so the
        // denominator vanishes only if z sits on the truncated spectrum,
        // and then the depth-consistency gate below rejects the result.
        let [u1, v1, w1] = t[1];
        let denom = d[0] * w1 + o[0] * v1;
        let sigma1 = b0 / denom;
        if !sigma1.is_finite() {
            return Err(numeric(format!(
                "second-kind anchor is singular at z = {z}"
            )));
        }
        let mut q = vec![0.0f64; n_max + 2];
        q[0] = sigma1 * w1;
        q[1] = sigma1 * v1;
        if n_max >= 1 {
            q[2] = sigma1 * u1;
        }
        // Propagate the scale along whichever shared component of the
        // neighboring triples is larger; consecutive entries never vanish
        // together, so one of the two is always sound.
        let mut sigma = sigma1;
        for j in 2..=n_max {
            let prev = t[j - 1];
            let cur = t[j];
            sigma *= if cur[1].abs() >= cur[2].abs() {
                prev[0] / cur[1]
            } else {
                prev[1] / cur[2]
            };
            q[j + 1] = sigma * cur[0];
        }
        Ok(q)
    };
    let deep = solve(n_max + buffer)?;
    let shallow = solve(n_max + buffer - 20)?;
    // Gate on the dominant entry of the last consecutive pair. The smaller
    // entry of a pair can sit on the noise floor (a symmetric system zeros
    // alternate entries exactly, leaving rounding residue), but consecutive
    // entries never both vanish, and every failure worth catching, such as
    // z inside a band or an exhausted buffer, contaminates dominant entries.
    let n0 = if deep[n_max].abs() >= deep[n_max + 1].abs() {
        n_max
    } else {
        n_max + 1
    };
    let denom = deep[n0].abs().max(1e-300);
    if ((deep[n0] - shallow[n0]) / denom).abs() > 1e-9 {
        return Err(numeric(format!(
            "second-kind values did not stabilize at z = {z}; is z inside a band?"
        )));
    }
    let mut out = deep;
    out.truncate(n_max + 1);
    Ok(out)
}

/// `sqrt(lambda_{n+2}) (P_n Q_{n+1} - Q_n P_{n+1})`; identically -1.
pub fn wronskian(rt: &RecurrenceTable, n: usize, z: f64) -> Result<f64> {
    let p = orthonormal_values(rt, n + 1, z)?;
    let q = weyl_values(rt, n + 1, z)?;
    Ok(rt.lambda[n + 1].sqrt() * (p[n] * q[n + 1] - q[n] * p[n + 1]))
}

/// Resolvent entries at fixed n: `(G_nn, G_{n+1,n}, G_{n,n+1})` given by
/// `P_n Q_n`, `P_n Q_{n+1}`, `P_{n+1} Q_n`; the off-diagonal pair differs
/// by exactly `1/sqrt(lambda_{n+2})`.
pub fn green_entries(rt: &RecurrenceTable, n: usize, z: f64) -> Result<(f64, f64, f64)> {
    let p = orthonormal_values(rt, n + 1, z)?;
    let q = weyl_values(rt, n + 1, z)?;
    Ok((p[n] * q[n], p[n] * q[n + 1], p[n + 1] * q[n]))
}

/// Zeros of `P_n` inside the open gaps: dense sign scan plus bisection.
/// At most one zero per gap can exist; the scan returns what it finds.
pub fn gap_zeros_of_p(
    rt: &RecurrenceTable,
    sys: &crate::geometry::IntervalSystem,
    n: usize,
    samples: usize,
) -> Result<Vec<Option<f64>>> {
    let eval = |x: f64| -> Result<f64> { Ok(orthonormal_values(rt, n, x)?[n]) };
    let mut out = Vec::with_capacity(sys.gaps());
    for j in 0..sys.gaps() {
        let (ga, gb) = sys.gap(j);
        out.push(scan_zero(ga, gb, samples, &eval)?);
    }
    Ok(out)
}

/// Generic sign-scan root isolation on an open interval.
pub fn scan_zero<F: Fn(f64) -> Result<f64>>(
    a: f64,
    b: f64,
    samples: usize,
    f: &F,
) -> Result<Option<f64>> {
    let pad = 1e-9 * (b - a);
    let (a, b) = (a + pad, b - pad);
    let mut prev_x = a;
    let mut prev_f = f(a)?;
    for i in 1..=samples {
        let x = a + (b - a) * i as f64 / samples as f64;
        let fx = f(x)?;
        if prev_f == 0.0 {
            return Ok(Some(prev_x));
        }
        if prev_f * fx < 0.0 {
            // Bisection refinement.
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev_f);
            for _ in 0..120 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 || hi - lo < 1e-14 * (1.0 + mid.abs()) {
                    return Ok(Some(mid));
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev_x = x;
        prev_f = fx;
    }
    Ok(None)
}

/// Gap zeros of `P_n` and of `Q_n` in one gap. `None` means no sign change
/// was found; a mass point sitting in the gap shows up in `Q_n` as a pole,
/// which the scan detects and does not report as a zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapZeros {
    pub p: Option<f64>,
    pub q: Option<f64>,
}

/// Locates the zeros of `P_n` and `Q_n` inside every open gap by dense sign
/// scan plus bisection. The second-kind scan skips sample points where the
/// truncation gate refuses to stabilize (this prunes thin slivers at the
/// band edges; widen the table beyond `n + 2 + 40` entries to shrink them)
/// and classifies each sign change as zero or pole by whether the refined
/// value shrinks below the bracket values; an accepted zero must also
/// separate opposite signs one sample cell to either side, which a value
/// glitch at an isolated point (a sample landing exactly on a mass point,
/// where the transform is undefined) cannot do. The second-kind sample
/// count is odd so that a symmetric gap is never probed exactly at its
/// center; the polynomial scan keeps the center sample, since a polynomial
/// is defined everywhere and its exact value at a symmetry point is what
/// resolves a zero pair pinned against an atom there. A zero of `P_n` and
/// a zero of `Q_n` in the same gap closer than 1e-9 violates the Wronskian
/// identity and is reported as an error.
pub fn gap_zeros(
    rt: &RecurrenceTable,
    sys: &crate::geometry::IntervalSystem,
    n: usize,
) -> Result<Vec<GapZeros>> {
    if rt.len() < n + 2 + 40 {
        return Err(invalid(
            "table too short for a stabilized second-kind scan",
        ));
    }
    let samples = 1 << 12;
    let eval_p = |x: f64| -> Result<f64> { Ok(orthonormal_values(rt, n, x)?[n]) };
    let mut out = Vec::with_capacity(sys.gaps());
    for j in 0..sys.gaps() {
        let (ga, gb) = sys.gap(j);
        let p = scan_zero(ga, gb, samples, &eval_p)?;
        let q = scan_weyl_zero(rt, n, ga, gb, samples + 1)?;
        if let (Some(zp), Some(zq)) = (p, q) {
            if (zp - zq).abs() < 1e-9 {
                return Err(consistency(format!(
                    "P_{n} and Q_{n} vanish together at {zp} in gap {j}"
                )));
            }
        }
        out.push(GapZeros { p, q });
    }
    Ok(out)
}

fn scan_weyl_zero(
    rt: &RecurrenceTable,
    n: usize,
    a: f64,
    b: f64,
    samples: usize,
) -> Result<Option<f64>> {
    let eval = |z: f64| -> Result<f64> { Ok(weyl_values(rt, n, z)?[n]) };
    let pad = 1e-9 * (b - a);
    let (a, b) = (a + pad, b - pad);
    // A failed sample breaks bracket continuity instead of aborting the scan.
    let mut prev: Option<(f64, f64)> = None;
    let mut i = 0usize;
    while i <= samples {
        let x = a + (b - a) * i as f64 / samples as f64;
        i += 1;
        let fx = match eval(x) {
            Ok(v) => v,
            Err(_) => {
                prev = None;
                continue;
            }
        };
        if fx == 0.0 {
            return Ok(Some(x));
        }
        if let Some((px, pf)) = prev {
            if pf * fx < 0.0 {
                // Geometric-mean scale: a bracket endpoint sitting next to
                // the pole itself must not inflate the yardstick.
                let bracket_scale = 10.0 * (pf.abs() * fx.abs()).sqrt();
                let (mut lo, mut hi, mut flo) = (px, x, pf);
                let mut last = bracket_scale;
                let mut refined = None;
                for _ in 0..120 {
                    let mid = 0.5 * (lo + hi);
                    let fm = match eval(mid) {
                        Ok(v) => v,
                        // The last resolvable point decides the
                        // classification below.
                        Err(_) => break,
                    };
                    last = fm.abs();
                    if fm == 0.0 || hi - lo < 1e-14 * (1.0 + mid.abs()) {
                        refined = Some(mid);
                        break;
                    }
                    if flo * fm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                // At a zero the values collapse as the bracket shrinks; at a
                // pole they blow up past the bracket endpoints.
                if last <= bracket_scale {
                    let r = refined.unwrap_or(0.5 * (lo + hi));
                    // A genuine crossing separates opposite signs a full
                    // cell away; a one-sample glitch leaves the same sign
                    // on both flanks. Unresolvable flanks do not veto.
                    let h = (b - a) / samples as f64;
                    let flanks = match (eval(r - h), eval(r + h)) {
                        (Ok(l), Ok(rr)) => l * rr,
                        _ => -1.0,
                    };
                    if flanks < 0.0 || r - h < a || r + h > b {
                        return Ok(Some(r));
                    }
                }
            }
        }
        prev = Some((x, fx));
    }
    Ok(None)
}
