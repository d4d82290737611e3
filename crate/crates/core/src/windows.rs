//! Coefficient windows around a table site, the moment invariants they
//! carry, and the closed-form extraction of a divisor pair from a window.
//!
//! The moments `mu_j = int x^j P_n^2 dmu` and `nu_j = sqrt(lambda_{n+2})
//! int x^j P_{n+1} P_n dmu` up to order m see exactly one centered block
//! of recurrence coefficients, and the map between block and moments is a
//! bijection that peels off one outermost entry per order. Convolving the
//! moments with the square-root branch series of H turns them into
//! polynomial coefficients, which is how a window names its divisor.

use crate::equilibrium::EquilibriumData;
use crate::error::{consistency, domain, invalid, Result};
use crate::geometry::IntervalSystem;
use crate::measure::DiscreteMeasure;
use crate::orthopoly::{orthonormal_values, RecurrenceTable};
use crate::pell::{
    defect_core, divisor_to_pair, pair_to_divisor, pell_step, tau_exact, tau_inverse, PellPair,
};
use crate::poly::Poly;
use crate::series::sqrt_h_star_series;

/// Site moments `mu_j`, `nu_j` for `j = 0..=order`, with `mu_0 = 1` and
/// `nu_0 = 0` by orthonormality.
#[derive(Clone, Debug)]
pub struct MomentWindow {
    pub n: usize,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub lambda_next: f64,
}

impl MomentWindow {
    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }
}

/// Quadrature moments at site `n` against the discrete measure the table
/// was built from. The first-order identities `mu_1 = alpha_{n+1}` and
/// `nu_1 = lambda_{n+2}` are enforced; a mismatch means the table and the
/// measure have drifted apart.
pub fn moment_window(
    dm: &DiscreteMeasure,
    rt: &RecurrenceTable,
    n: usize,
    m: usize,
) -> Result<MomentWindow> {
    if m == 0 {
        return Err(invalid("moment order must be at least 1"));
    }
    if n + 2 > rt.len() {
        return Err(invalid(format!(
            "site {n} needs table length {}, have {}",
            n + 2,
            rt.len()
        )));
    }
    let lambda_next = rt.lambda[n + 1];
    let root = lambda_next.sqrt();
    let mut mu = vec![0.0; m + 1];
    let mut nu = vec![0.0; m + 1];
    for (&x, &w) in dm.nodes.iter().zip(&dm.weights) {
        let p = orthonormal_values(rt, n + 1, x)?;
        let diag = w * p[n] * p[n];
        let cross = w * root * p[n + 1] * p[n];
        let mut xp = 1.0;
        for j in 0..=m {
            mu[j] += diag * xp;
            nu[j] += cross * xp;
            xp *= x;
        }
    }
    // Mismatch here means the table does not belong to the measure; a
    // genuine mismatch is O(1). The margin leaves room for the noise of a
    // mass point deep in a gap, which grows like e^{n g(y)} and reaches
    // a few 1e-10 by n = 100 for a point at g(y) ~ 0.25.
    let a = rt.alpha[n];
    if (mu[1] - a).abs() > 2e-9 * (1.0 + a.abs()) {
        return Err(consistency(format!(
            "first moment {} disagrees with the table entry {a}",
            mu[1]
        )));
    }
    if (nu[1] - lambda_next).abs() > 2e-9 * (1.0 + lambda_next) {
        return Err(consistency(format!(
            "first cross moment {} disagrees with the table entry {lambda_next}",
            nu[1]
        )));
    }
    Ok(MomentWindow {
        n,
        mu,
        nu,
        lambda_next,
    })
}

/// A centered block of recurrence coefficients around one site: entries
/// `x_i = alpha_{i+n}` for `i` in `[1 - floor((m-1)/2), floor(m/2) + 1]`
/// and `y_i = lambda_{i+n}` for `i` in `[2 - floor(m/2),
/// floor((m-1)/2) + 2]`, stored in ascending index order. These are
/// exactly the entries the first `m` moment orders at site `n` can reach.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffWindow {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl CoeffWindow {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(invalid("window needs equally many alpha and lambda entries"));
        }
        if y.iter().any(|v| !(*v > 0.0)) {
            return Err(invalid("window lambda entries must be positive"));
        }
        Ok(CoeffWindow { x, y })
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    fn x_lo(m: usize) -> i64 {
        1 - (m as i64 - 1) / 2
    }

    fn y_lo(m: usize) -> i64 {
        2 - m as i64 / 2
    }

    /// Entrywise deviation from another window of the same order.
    pub fn distance(&self, other: &CoeffWindow) -> f64 {
        self.x
            .iter()
            .chain(&self.y)
            .zip(other.x.iter().chain(&other.y))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Cuts the order-`m` window at site `n` out of a recurrence table.
pub fn window_from_table(rt: &RecurrenceTable, n: usize, m: usize) -> Result<CoeffWindow> {
    if m == 0 {
        return Err(invalid("window order must be at least 1"));
    }
    let n = n as i64;
    let len = rt.len() as i64;
    let x_lo = CoeffWindow::x_lo(m);
    let y_lo = CoeffWindow::y_lo(m);
    let x_hi = x_lo + m as i64 - 1;
    let y_hi = y_lo + m as i64 - 1;
    if n + x_lo < 1 || n + y_lo < 1 {
        return Err(invalid("site too close to the table start for this order"));
    }
    if n + x_hi > len || n + y_hi > len {
        return Err(invalid("site too close to the table end for this order"));
    }
    let x = (x_lo..=x_hi)
        .map(|i| rt.alpha[(i + n - 1) as usize])
        .collect();
    let y = (y_lo..=y_hi)
        .map(|i| rt.lambda[(i + n - 1) as usize])
        .collect();
    CoeffWindow::new(x, y)
}

/// Invariants of the window, interleaved `(I_{1,0}, sqrt(y_2) I_{1,1},
/// ..., I_{m,0}, sqrt(y_2) I_{m,1})`. `I_{j,k}` is the `(0,k)` entry of
/// the j-th power of the tridiagonal matrix the window fills in; for a
/// window cut from a table these are the site moments `(mu_j, nu_j)`.
pub fn imap(w: &CoeffWindow) -> Result<Vec<f64>> {
    invariants_raw(&w.x, &w.y)
}

fn invariants_raw(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let m = x.len();
    if y.iter().any(|v| *v < 0.0) {
        return Err(invalid("window lambda entries must be nonnegative"));
    }
    let x_lo = CoeffWindow::x_lo(m);
    let y_lo = CoeffWindow::y_lo(m);
    // Sites reached by any contributing path; outer diagonals stay zero.
    let s_lo = -(m as i64 / 2);
    let s_hi = m as i64 / 2 + 1;
    let size = (s_hi - s_lo + 1) as usize;
    let pos = |s: i64| (s - s_lo) as usize;
    let mut diag = vec![0.0; size];
    let mut off = vec![0.0; size - 1];
    for s in s_lo..=s_hi {
        let i = s + 1 - x_lo;
        if (0..m as i64).contains(&i) {
            diag[pos(s)] = x[i as usize];
        }
    }
    for s in s_lo..s_hi {
        let i = s + 2 - y_lo;
        if (0..m as i64).contains(&i) {
            off[pos(s)] = y[i as usize].sqrt();
        }
    }
    let sq2 = y[(2 - y_lo) as usize].sqrt();
    let mut v = vec![0.0; size];
    v[pos(0)] = 1.0;
    let mut tmp = vec![0.0; size];
    let mut out = Vec::with_capacity(2 * m);
    for _ in 0..m {
        for k in 0..size {
            let mut acc = diag[k] * v[k];
            if k > 0 {
                acc += off[k - 1] * v[k - 1];
            }
            if k + 1 < size {
                acc += off[k] * v[k + 1];
            }
            tmp[k] = acc;
        }
        std::mem::swap(&mut v, &mut tmp);
        out.push(v[pos(0)]);
        out.push(sq2 * v[pos(1)]);
    }
    Ok(out)
}

/// Rebuilds the window from its invariants by peeling one outermost entry
/// per order: at even order the new entries are the leftmost lambda and
/// the rightmost alpha, at odd order the reverse. Each new entry enters
/// its invariant linearly with a positive product of inner lambdas as the
/// coefficient, so two evaluations pin it down.
pub fn imap_inverse(m: usize, inv: &[f64]) -> Result<CoeffWindow> {
    if m == 0 || inv.len() != 2 * m {
        return Err(invalid("invariant vector length must be twice the order"));
    }
    let (x, y) = peel(m, inv)?;
    CoeffWindow::new(x, y)
}

fn peel(m: usize, inv: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 1 {
        if !(inv[1] > 0.0) {
            return Err(consistency(
                "invariants are outside the window range: nonpositive coupling",
            ));
        }
        return Ok((vec![inv[0]], vec![inv[1]]));
    }
    let (ix, iy) = peel(m - 1, &inv[..2 * (m - 1)])?;
    let even = m % 2 == 0;
    let assemble = |left: f64, right: f64| -> (Vec<f64>, Vec<f64>) {
        let mut x = ix.clone();
        let mut y = iy.clone();
        if even {
            y.insert(0, left);
            x.push(right);
        } else {
            x.insert(0, left);
            y.push(right);
        }
        (x, y)
    };
    let top0 = inv[2 * m - 2];
    let top1 = inv[2 * m - 1];
    // The rightmost unknown cannot reach I_{m,0}, so 0 serves as a dummy.
    let probe = |left: f64, right: f64, slot: usize| -> Result<f64> {
        let (x, y) = assemble(left, right);
        Ok(invariants_raw(&x, &y)?[2 * m - 2 + slot])
    };
    let base0 = probe(0.0, 0.0, 0)?;
    let gain0 = probe(1.0, 0.0, 0)? - base0;
    if gain0.abs() < 1e-250 {
        return Err(consistency("degenerate inner couplings in the window"));
    }
    let left = (top0 - base0) / gain0;
    if even && !(left > 0.0) {
        return Err(consistency(
            "invariants are outside the window range: nonpositive coupling",
        ));
    }
    let base1 = probe(left, 0.0, 1)?;
    let gain1 = probe(left, 1.0, 1)? - base1;
    if gain1.abs() < 1e-250 {
        return Err(consistency("degenerate inner couplings in the window"));
    }
    let right = (top1 - base1) / gain1;
    if !even && !(right > 0.0) {
        return Err(consistency(
            "invariants are outside the window range: nonpositive coupling",
        ));
    }
    Ok(assemble(left, right))
}

/// Divisor pair named by a moment window: convolving the moments with the
/// branch series of `sqrt(H*)` yields the coefficients of `G` (from `mu`)
/// and `F` (from `nu`), highest first. Returns the monic-normalized pair
/// and the drift of the two leading coefficients from 1.
pub fn extract_pair(sys: &IntervalSystem, mw: &MomentWindow) -> Result<(PellPair, f64)> {
    let l = sys.bands();
    if mw.order() + 1 < l {
        return Err(invalid(format!(
            "window order {} cannot name a degree-{} polynomial",
            mw.order(),
            l - 1
        )));
    }
    let h = sqrt_h_star_series(sys, l + 1);
    let mut gc = vec![0.0; l];
    let mut p0 = 1.0;
    for t in 0..l {
        let acc: f64 = (0..=t).map(|i| h[i] * mw.mu[t - i]).sum();
        if t == 0 {
            p0 = acc;
        }
        gc[l - 1 - t] = acc;
    }
    let mut fc = vec![0.0; l + 1];
    let mut q0 = 1.0;
    for t in 0..=l {
        let mut acc = h[t];
        for i in 0..t {
            acc += 2.0 * h[i] * mw.nu[t - 1 - i];
        }
        if t == 0 {
            q0 = acc;
        }
        fc[l - t] = acc;
    }
    let drift = (p0 - 1.0).abs().max((q0 - 1.0).abs());
    if drift > 0.1 {
        return Err(consistency(format!(
            "leading-coefficient drift {drift:.3} is too large for extraction"
        )));
    }
    for c in gc.iter_mut() {
        *c /= p0;
    }
    for c in fc.iter_mut() {
        *c /= q0;
    }
    Ok((
        PellPair {
            f: Poly::new(fc),
            g: Poly::new(gc),
        },
        drift,
    ))
}

/// Tail coefficients that vanish exactly when the window sits on the
/// invariant family: `r_moment[t]` for `t = l..=order` and `r_cross[t]`
/// for `t = l+1..=order` are the coefficients of negative powers in the
/// same convolutions that `extract_pair` truncates.
pub fn window_residuals(
    sys: &IntervalSystem,
    mw: &MomentWindow,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = sys.bands();
    let m = mw.order();
    if m < l {
        return Err(invalid("window order must reach past the band count"));
    }
    let h = sqrt_h_star_series(sys, m + 1);
    let r_moment = (l..=m)
        .map(|t| (0..=t).map(|i| h[i] * mw.mu[t - i]).sum())
        .collect();
    let r_cross = (l + 1..=m)
        .map(|t| h[t] + 2.0 * (0..t).map(|i| h[i] * mw.nu[t - 1 - i]).sum::<f64>())
        .collect();
    Ok((r_moment, r_cross))
}

/// Predicts the window one site further along the table. The window is
/// read as moment coordinates, inverted to a divisor, advanced by one
/// defect step, and folded back. Rejects windows whose extracted pair
/// strays from the polynomial identity by more than 1e-6.
pub fn shift_window(eq: &EquilibriumData, w: &CoeffWindow) -> Result<CoeffWindow> {
    let sys = &eq.sys;
    let l = sys.bands();
    if l < 2 {
        return Err(domain("a single band carries no window dynamics"));
    }
    if w.order() != l - 1 {
        return Err(invalid(format!(
            "shift needs a window of order {}, got {}",
            l - 1,
            w.order()
        )));
    }
    let inv = imap(w)?;
    let a: Vec<f64> = inv.iter().step_by(2).copied().collect();
    let b: Vec<f64> = inv.iter().skip(1).step_by(2).copied().collect();
    let pair = tau_inverse(sys, &a, &b)?;
    let (_, _, resid) = defect_core(sys, &pair)?;
    if resid > 1e-6 {
        return Err(consistency(format!(
            "window is {resid:.2e} away from the invariant family"
        )));
    }
    let div = pair_to_divisor(sys, &pair)?;
    let (next, _) = pell_step(eq, &div)?;
    let pair2 = divisor_to_pair(sys, &next)?;
    let (a2, b2) = tau_exact(sys, &pair2);
    let mut inv2 = Vec::with_capacity(2 * (l - 1));
    for j in 0..l - 1 {
        inv2.push(a2[j]);
        inv2.push(b2[j]);
    }
    imap_inverse(l - 1, &inv2)
}
