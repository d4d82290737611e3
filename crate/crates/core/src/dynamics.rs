//! Rotation-number dynamics of divisor tracks: phase coordinates, the
//! one-step rotation law, Kronecker subsequence selection, window
//! convergence along subsequences, and orbit equidistribution statistics.

use crate::divisor::GapDivisor;
use crate::equilibrium::EquilibriumData;
use crate::error::{invalid, Result};
use crate::orthopoly::RecurrenceTable;
use crate::pell::{pell_step, theta_track};
use crate::torus::{circle_dist, wrap01};
use crate::windows::window_from_table;

/// Phase coordinates of a run of divisors, one point of `[0,1)^{l-1}`
/// per index starting at `start`.
#[derive(Clone, Debug)]
pub struct ThetaTrack {
    pub start: usize,
    pub theta: Vec<Vec<f64>>,
}

impl ThetaTrack {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Phases of consecutive divisors: half the sheet-signed sum of harmonic
/// measures at the divisor points, folded into `[0,1)`.
pub fn theta_sequence(
    eq: &EquilibriumData,
    start: usize,
    divisors: &[GapDivisor],
) -> Result<ThetaTrack> {
    let mut theta = Vec::with_capacity(divisors.len());
    for d in divisors {
        theta.push(theta_track(eq, d)?);
    }
    Ok(ThetaTrack { start, theta })
}

/// Deviation of each step of the track from rotation by `-omega_inf`:
/// the circle distance of `theta(n+1) - theta(n) + omega_inf` from zero,
/// maximized over components.
pub fn rotation_residuals(track: &ThetaTrack, omega_inf: &[f64]) -> Result<Vec<f64>> {
    if track.len() < 2 {
        return Err(invalid("rotation law needs at least two consecutive phases"));
    }
    let k = track.theta[0].len();
    if omega_inf.len() != k {
        return Err(invalid("rotation vector length does not match the track"));
    }
    Ok(track
        .theta
        .windows(2)
        .map(|pair| {
            (0..k)
                .map(|j| circle_dist(pair[1][j] - pair[0][j] + omega_inf[j], 0.0))
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Indices whose rotation orbit visits an `eps`-box, with return-gap
/// statistics.
#[derive(Clone, Debug)]
pub struct SubsequenceReport {
    pub indices: Vec<usize>,
    pub gaps: Vec<usize>,
    pub max_gap: Option<usize>,
}

/// All `n <= n_max` with `n * omega_inf mod 1` within `eps` of `gamma`
/// in every component, by direct scan. An empty result is a legitimate
/// outcome for rational rotation vectors.
pub fn select_subsequence(
    omega_inf: &[f64],
    gamma: &[f64],
    eps: f64,
    n_max: usize,
) -> Result<SubsequenceReport> {
    if omega_inf.is_empty() || omega_inf.len() != gamma.len() {
        return Err(invalid("rotation vector and target must share a dimension"));
    }
    if !(eps > 0.0) {
        return Err(invalid("window size must be positive"));
    }
    let mut indices = Vec::new();
    let mut phase: Vec<f64> = vec![0.0; omega_inf.len()];
    for n in 0..=n_max {
        let hit = phase
            .iter()
            .zip(gamma)
            .all(|(p, g)| circle_dist(*p, *g) < eps);
        if hit {
            indices.push(n);
        }
        for (p, w) in phase.iter_mut().zip(omega_inf) {
            *p = wrap01(*p + *w);
        }
    }
    let gaps: Vec<usize> = indices.windows(2).map(|w| w[1] - w[0]).collect();
    let max_gap = gaps.iter().copied().max();
    Ok(SubsequenceReport {
        indices,
        gaps,
        max_gap,
    })
}

/// Max pairwise distance among the windows at the last `K = 10` selected
/// indices (or all of them, if fewer). A shrinking diameter along a
/// subsequence is the window-side face of phase convergence.
pub fn window_convergence(rt: &RecurrenceTable, indices: &[usize], l: usize) -> Result<f64> {
    if l < 2 {
        return Err(invalid("need at least one gap for window dynamics"));
    }
    if indices.is_empty() {
        return Err(invalid("no indices selected"));
    }
    const K: usize = 10;
    let tail = &indices[indices.len().saturating_sub(K)..];
    let mut wins = Vec::with_capacity(tail.len());
    for &n in tail {
        wins.push(window_from_table(rt, n, l - 1)?);
    }
    let mut diam = 0.0f64;
    for i in 0..wins.len() {
        for j in i + 1..wins.len() {
            diam = diam.max(wins[i].distance(&wins[j]));
        }
    }
    Ok(diam)
}

/// `k` defect steps from `div0`. Returns the `k + 1` divisors including
/// the start, together with their phase track.
pub fn torus_orbit(
    eq: &EquilibriumData,
    div0: &GapDivisor,
    k: usize,
) -> Result<(Vec<GapDivisor>, ThetaTrack)> {
    if k == 0 {
        return Err(invalid("orbit length must be at least 1"));
    }
    let mut orbit = Vec::with_capacity(k + 1);
    orbit.push(div0.clone());
    for _ in 0..k {
        let (next, _) = pell_step(eq, orbit.last().unwrap())?;
        orbit.push(next);
    }
    let track = theta_sequence(eq, 0, &orbit)?;
    Ok((orbit, track))
}

/// Star discrepancy of a point set in `[0,1)^d`: the worst deviation of
/// the empirical count of an origin-anchored box from its volume. Exact
/// in one dimension; for `d >= 2` the boxes run over a corner grid, which
/// bounds the true value from below.
pub fn star_discrepancy(points: &[Vec<f64>]) -> Result<f64> {
    if points.is_empty() {
        return Err(invalid("discrepancy of an empty point set"));
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(invalid("points must share a positive dimension"));
    }
    if points
        .iter()
        .any(|p| p.iter().any(|x| !(0.0..1.0).contains(x)))
    {
        return Err(invalid("points must lie in the half-open unit cube"));
    }
    let n = points.len() as f64;
    if d == 1 {
        let mut u: Vec<f64> = points.iter().map(|p| p[0]).collect();
        u.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut worst = 0.0f64;
        for (i, x) in u.iter().enumerate() {
            let hi = (i + 1) as f64 / n - x;
            let lo = x - i as f64 / n;
            worst = worst.max(hi).max(lo);
        }
        return Ok(worst);
    }
    let grid = match d {
        2 => 64usize,
        _ => 16,
    };
    let mut corner = vec![0usize; d];
    let mut worst = 0.0f64;
    loop {
        let t: Vec<f64> = corner.iter().map(|c| (*c + 1) as f64 / grid as f64).collect();
        let vol: f64 = t.iter().product();
        let count = points
            .iter()
            .filter(|p| p.iter().zip(&t).all(|(x, b)| x < b))
            .count() as f64;
        worst = worst.max((count / n - vol).abs());
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(worst);
            }
            corner[axis] += 1;
            if corner[axis] < grid {
                break;
            }
            corner[axis] = 0;
            axis += 1;
        }
    }
}
