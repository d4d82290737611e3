//! Release battery: the headline identities of the crate exercised end to
//! end on fixed reference systems at frozen tolerances. Every check emits
//! one row per verified clause; a row passes when `value <= tolerance`, so
//! reports stay machine-diffable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisor::GapDivisor;
use crate::dynamics::{
    rotation_residuals, select_subsequence, star_discrepancy, theta_sequence, torus_orbit,
};
use crate::equilibrium::{equilibrium, EquilibriumData};
use crate::error::{consistency, invalid, Result};
use crate::geometry::IntervalSystem;
use crate::measure::{discretize, DiscreteMeasure, MeasureSpec, PointMass, WeightKind};
use crate::orthopoly::{gap_zeros, orthonormal_values, stieltjes, weyl_values, RecurrenceTable};
use crate::pell::{
    divisor_to_pair, pair_to_divisor, pell_certificate, pell_defect, tau_exact, tau_inverse,
    two_interval_limits,
};
use crate::poly::Poly;
use crate::riemann::riemann_data;
use crate::series::c_series;
use crate::windows::{
    extract_pair, imap, imap_inverse, moment_window, shift_window, window_from_table,
    window_residuals, CoeffWindow,
};

/// One verified clause. `pass` is `value <= tolerance` with non-finite
/// values always failing.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn row(criterion: &str, value: f64, tolerance: f64) -> CriterionReport {
    CriterionReport {
        criterion: criterion.to_string(),
        value,
        tolerance,
        pass: value.is_finite() && value <= tolerance,
    }
}

/// The battery, in reporting order.
pub const CHECKS: [&str; 12] = [
    "potential-theory",
    "wronskian",
    "abel-consistency",
    "pell-identities",
    "rotation-law",
    "coefficient-limits",
    "window-roundtrip",
    "tau-roundtrip",
    "family-residuals",
    "zero-families",
    "one-step-shift",
    "equidistribution",
];

/// Runs a single named check. The seed only matters for the randomized
/// checks (`abel-consistency`, `window-roundtrip`).
pub fn run(check: &str, seed: u64) -> Result<Vec<CriterionReport>> {
    match check {
        "potential-theory" => potential_theory(),
        "wronskian" => wronskian_rows(),
        "abel-consistency" => abel_rows(seed),
        "pell-identities" => pell_rows(),
        "rotation-law" => rotation_rows(),
        "coefficient-limits" => limit_rows(),
        "window-roundtrip" => window_roundtrip_rows(seed),
        "tau-roundtrip" => tau_roundtrip_rows(),
        "family-residuals" => family_residual_rows(),
        "zero-families" => zero_family_rows(),
        "one-step-shift" => shift_rows(),
        "equidistribution" => equidistribution_rows(),
        other => Err(invalid(format!("unknown check {other}"))),
    }
}

/// Runs the whole battery. A check that cannot even compute contributes a
/// single failing row carrying the error text.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CHECKS
        .iter()
        .flat_map(|name| match run(name, seed) {
            Ok(rows) => rows,
            Err(e) => vec![CriterionReport {
                criterion: format!("{name}.error: {e}"),
                value: f64::INFINITY,
                tolerance: 0.0,
                pass: false,
            }],
        })
        .collect()
}

fn sym2() -> Result<IntervalSystem> {
    IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0])
}

fn three() -> Result<IntervalSystem> {
    IntervalSystem::new(vec![-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])
}

/// Two-gap system tuned so the first rotation component is within 1e-13
/// of the golden mean complement.
fn golden() -> Result<IntervalSystem> {
    IntervalSystem::new(vec![0.0, 1.0, 2.0, 4.597769030755])
}

fn fold_max(acc: f64, v: f64) -> f64 {
    acc.max(v)
}

fn potential_theory() -> Result<Vec<CriterionReport>> {
    let sys = sym2()?;
    let eq = equilibrium(&sys, 800)?;
    let c = c_series(&sys, 3);
    let omega_dev = eq
        .omega_inf
        .iter()
        .map(|w| (w - 0.5).abs())
        .fold(0.0, fold_max);
    Ok(vec![
        row("potential-theory.c1", c[1].abs(), 1e-10),
        row("potential-theory.omega-inf", omega_dev, 1e-9),
        row(
            "potential-theory.capacity",
            (eq.capacity - 3f64.sqrt() / 4.0).abs(),
            1e-8,
        ),
        row(
            "potential-theory.green-origin",
            (eq.green(0.0) - 0.5 * 3f64.ln()).abs(),
            1e-8,
        ),
    ])
}

fn wronskian_rows() -> Result<Vec<CriterionReport>> {
    let sys = sym2()?;
    let div = GapDivisor::new(&sys, vec![(0.0, 1)])?;
    let mut augmented = MeasureSpec::equilibrium_of(&sys);
    augmented.point_masses.push(PointMass {
        position: 0.2,
        mass: 0.05,
    });
    let specs = [
        MeasureSpec::equilibrium_of(&sys),
        MeasureSpec {
            endpoints: sys.endpoints().to_vec(),
            weight: WeightKind::PolyTimesEquilibrium {
                coeffs: vec![1.0, 0.0, 1.0],
            },
            point_masses: Vec::new(),
        },
        MeasureSpec::isospectral_of(&sys, &div),
        augmented,
    ];
    let n_max = 100;
    // Probes sit at least 1/21 of the gap away from the band edges, where
    // a buffer of 100 stabilizes the second-kind sweep.
    let rt_len = n_max + 3 + 100;
    let mut worst = 0.0f64;
    for spec in &specs {
        let dm = discretize(spec, 1024)?;
        let rt = stieltjes(&dm, rt_len)?;
        for j in 0..sys.gaps() {
            let (ga, gb) = sys.gap(j);
            for i in 1..=20 {
                let z = ga + (gb - ga) * i as f64 / 21.0;
                let p = orthonormal_values(&rt, n_max + 1, z)?;
                let q = weyl_values(&rt, n_max + 1, z)?;
                for n in 0..=n_max {
                    let w = rt.lambda[n + 1].sqrt() * (p[n] * q[n + 1] - q[n] * p[n + 1]);
                    worst = worst.max((w + 1.0).abs());
                }
            }
        }
    }
    Ok(vec![row("wronskian.deviation", worst, 1e-8)])
}

fn abel_rows(seed: u64) -> Result<Vec<CriterionReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA8E1);
    let mut worst = 0.0f64;
    for sys in [sym2()?, three()?] {
        let eq = equilibrium(&sys, 400)?;
        let rd = riemann_data(&sys, 400)?;
        for _ in 0..50 {
            let pts: Vec<(f64, i8)> = (0..sys.gaps())
                .map(|j| {
                    let (ga, gb) = sys.gap(j);
                    let u: f64 = rng.gen_range(0.05..0.95);
                    let d: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
                    (ga + (gb - ga) * u, d)
                })
                .collect();
            let div = GapDivisor::new(&sys, pts)?;
            worst = worst.max(rd.abel_consistency(&eq, &div)?);
        }
    }
    Ok(vec![row("abel-consistency.residual", worst, 1e-7)])
}

fn pell_rows() -> Result<Vec<CriterionReport>> {
    let sym = sym2()?;
    let eq_sym = equilibrium(&sym, 800)?;
    let tri = three()?;
    let eq_tri = equilibrium(&tri, 600)?;
    let mut identity = 0.0f64;
    let mut potentials = 0.0f64;
    let mut check = |eq: &EquilibriumData, div: &GapDivisor| -> Result<()> {
        let cert = pell_certificate(eq, div)?;
        identity = identity.max(cert.identity_residual);
        potentials = potentials.max((cert.l_const - cert.l_from_potentials).abs() / cert.l_const);
        Ok(())
    };
    for &y in &[-0.45, -0.3, -0.15, 0.0, 0.1, 0.25, 0.4, 0.48] {
        for &d in &[-1i8, 1] {
            check(&eq_sym, &GapDivisor::new(&sym, vec![(y, d)])?)?;
        }
    }
    for &(y1, y2) in &[(-0.45, 0.3), (-0.3, 0.45), (-0.35, 0.35), (-0.25, 0.42)] {
        for &(d1, d2) in &[(1i8, -1i8), (-1, 1), (1, 1), (-1, -1)] {
            check(&eq_tri, &GapDivisor::new(&tri, vec![(y1, d1), (y2, d2)])?)?;
        }
    }
    // Worked value at the gap center of the symmetric set, and the
    // telescoped product over one orbit period against the capacity.
    let div0 = GapDivisor::new(&sym, vec![(0.0, 1)])?;
    let pair0 = divisor_to_pair(&sym, &div0)?;
    let (l0, _) = pell_defect(&sym, &pair0)?;
    let worked = (l0 - 2.25).abs();
    let (orbit, _) = torus_orbit(&eq_sym, &div0, 2)?;
    let mut prod = 1.0;
    for d in &orbit[..2] {
        let pair = divisor_to_pair(&sym, d)?;
        let (l, _) = pell_defect(&sym, &pair)?;
        prod *= l / 4.0;
    }
    let cap2 = eq_sym.capacity * eq_sym.capacity;
    let telescoped = (prod - cap2 * cap2).abs() / (cap2 * cap2);
    Ok(vec![
        row("pell-identities.identity", identity, 1e-10),
        row("pell-identities.potentials", potentials, 1e-7),
        row("pell-identities.telescoped", telescoped, 1e-7),
        row("pell-identities.worked-value", worked, 1e-12),
    ])
}

fn window_divisor(
    sys: &IntervalSystem,
    dm: &DiscreteMeasure,
    rt: &RecurrenceTable,
    n: usize,
) -> Result<GapDivisor> {
    let mw = moment_window(dm, rt, n, sys.bands() - 1)?;
    let (pair, _) = extract_pair(sys, &mw)?;
    pair_to_divisor(sys, &pair)
}

/// Rotation residuals along the longest chain of consecutive sites whose
/// windows name a divisor, walking back from the deep end of the table.
/// Returns the residuals and the first site of the chain.
fn measured_residuals(
    sys: &IntervalSystem,
    eq: &EquilibriumData,
    dm: &DiscreteMeasure,
    rt: &RecurrenceTable,
) -> Result<(Vec<f64>, usize)> {
    let hi = rt.len() - 2;
    let mut divisors: Vec<GapDivisor> = Vec::new();
    let mut n0 = hi + 1;
    for n in (3..=hi).rev() {
        match window_divisor(sys, dm, rt, n) {
            Ok(d) => {
                divisors.push(d);
                n0 = n;
            }
            Err(_) => break,
        }
    }
    divisors.reverse();
    if divisors.len() < 2 {
        return Err(consistency("no window chain forms on this table"));
    }
    let track = theta_sequence(eq, n0, &divisors)?;
    Ok((rotation_residuals(&track, &eq.omega_inf)?, n0))
}

/// Max residual over the steps starting at site `s` or later; infinite if
/// the measured chain does not reach down to `s`.
fn tail_max(res: &[f64], n0: usize, s: usize) -> f64 {
    if n0 > s {
        return f64::INFINITY;
    }
    res.iter()
        .enumerate()
        .filter(|(i, _)| n0 + i >= s)
        .map(|(_, r)| *r)
        .fold(f64::NAN, f64::max)
}

/// Trend of a residual track: the ratio of the second-half max to the
/// first-half max, or 0 when the whole track already sits on the floor.
fn trend(res: &[f64]) -> f64 {
    if res.iter().all(|r| *r <= 1e-9) {
        return 0.0;
    }
    let mid = res.len() / 2;
    let a = res[..mid].iter().copied().fold(0.0f64, fold_max);
    let b = res[mid..].iter().copied().fold(0.0f64, fold_max);
    if a == 0.0 {
        return f64::INFINITY;
    }
    b / a
}

fn rotation_rows() -> Result<Vec<CriterionReport>> {
    let sym = sym2()?;
    let eq = equilibrium(&sym, 2048)?;
    let mut exact = 0.0f64;
    for start in [
        GapDivisor::new(&sym, vec![(0.3, 1)])?,
        GapDivisor::new(&sym, vec![(-0.2, -1)])?,
    ] {
        let (_, track) = torus_orbit(&eq, &start, 40)?;
        let res = rotation_residuals(&track, &eq.omega_inf)?;
        exact = res.iter().fold(exact, |m, r| m.max(*r));
    }
    let tri = three()?;
    let eq_tri = equilibrium(&tri, 600)?;
    let d3 = GapDivisor::new(&tri, vec![(-0.35, 1), (0.45, -1)])?;
    let (_, track3) = torus_orbit(&eq_tri, &d3, 25)?;
    exact = rotation_residuals(&track3, &eq_tri.omega_inf)?
        .iter()
        .fold(exact, |m, r| m.max(*r));

    let depth = 120;
    let dm_eq = discretize(&MeasureSpec::equilibrium_of(&sym), 2048)?;
    let rt_eq = stieltjes(&dm_eq, depth)?;
    let (res_eq, n0_eq) = measured_residuals(&sym, &eq, &dm_eq, &rt_eq)?;
    let szego = MeasureSpec {
        endpoints: sym.endpoints().to_vec(),
        weight: WeightKind::PolyTimesEquilibrium {
            coeffs: vec![1.0, 0.0, 1.0],
        },
        point_masses: Vec::new(),
    };
    let dm_q = discretize(&szego, 2048)?;
    let rt_q = stieltjes(&dm_q, depth)?;
    let (res_q, n0_q) = measured_residuals(&sym, &eq, &dm_q, &rt_q)?;
    Ok(vec![
        row("rotation-law.exact-orbits", exact, 1e-7),
        row(
            "rotation-law.equilibrium-track",
            tail_max(&res_eq, n0_eq, 50),
            5e-3,
        ),
        row("rotation-law.equilibrium-trend", trend(&res_eq), 1.0),
        row("rotation-law.szego-track", tail_max(&res_q, n0_q, 80), 5e-3),
    ])
}

fn limit_rows() -> Result<Vec<CriterionReport>> {
    let sys = sym2()?;
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 1024)?;
    let rt = stieltjes(&dm, 210)?;
    let targets = [(0.0, 9.0 / 16.0), (0.0, 1.0 / 16.0)];
    let mut measured = 0.0f64;
    let mut hit = [usize::MAX; 2];
    for parity in 0..2 {
        let mut dev = [0.0f64; 2];
        for n in (196..=205).filter(|n| n % 2 == parity) {
            let a = rt.alpha[n - 1];
            let l = rt.lambda[n - 1];
            for (t, (ta, tl)) in targets.iter().enumerate() {
                dev[t] = dev[t].max((a - ta).abs().max((l - tl).abs()));
            }
        }
        let best = if dev[0] <= dev[1] { 0 } else { 1 };
        hit[parity] = best;
        measured = measured.max(dev[best]);
    }
    let coverage = if hit[0] != hit[1] { 0.0 } else { 2.0 };

    // Same limits through the moment coordinates: rebuild the pair from
    // its expansion moments, then read the limits off the defect constant
    // and the divisor root.
    let c = c_series(&sys, 3);
    let (ga, gb) = sys.gap(0);
    let mut routes = 0.0f64;
    for i in 0..20 {
        let y = ga + (gb - ga) * (i as f64 + 0.5) / 20.0;
        for &d in &[-1i8, 1] {
            let (a1, l1) = two_interval_limits(&sys, y, d)?;
            let pair = divisor_to_pair(&sys, &GapDivisor::new(&sys, vec![(y, d)])?)?;
            let (am, bm) = tau_exact(&sys, &pair);
            let pair2 = tau_inverse(&sys, &am, &bm)?;
            let y2 = -pair2.g.coeffs()[0];
            let (l_const, _) = pell_defect(&sys, &pair2)?;
            let a2 = c[1] - y2;
            let l2 = l_const / 4.0;
            routes = routes.max((a1 - a2).abs().max((l1 - l2).abs()));
        }
    }
    Ok(vec![
        row("coefficient-limits.measured", measured, 1e-3),
        row("coefficient-limits.coverage", coverage, 0.5),
        row("coefficient-limits.routes", routes, 1e-10),
    ])
}

fn window_roundtrip_rows(seed: u64) -> Result<Vec<CriterionReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x13A9);
    let mut worst = 0.0f64;
    for i in 0..100usize {
        let m = 1 + i % 4;
        let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
        let w = CoeffWindow::new(x, y)?;
        let back = imap_inverse(m, &imap(&w)?)?;
        worst = worst.max(w.distance(&back));
    }
    let sys = sym2()?;
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 1024)?;
    let rt = stieltjes(&dm, 60)?;
    let (n, m) = (40, 4);
    let w = window_from_table(&rt, n, m)?;
    let inv = imap(&w)?;
    let mw = moment_window(&dm, &rt, n, m)?;
    let mut cross = 0.0f64;
    for j in 1..=m {
        cross = cross.max((inv[2 * j - 2] - mw.mu[j]).abs());
        cross = cross.max((inv[2 * j - 1] - mw.nu[j]).abs());
    }
    Ok(vec![
        row("window-roundtrip.identity", worst, 1e-10),
        row("window-roundtrip.quadrature", cross, 1e-8),
    ])
}

fn coeff_dist(a: &Poly, b: &Poly) -> f64 {
    if a.coeffs().len() != b.coeffs().len() {
        return f64::INFINITY;
    }
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, fold_max)
}

fn tau_roundtrip_rows() -> Result<Vec<CriterionReport>> {
    let mut worst = 0.0f64;
    for sys in [sym2()?, three()?] {
        for i in 0..20usize {
            let pts: Vec<(f64, i8)> = (0..sys.gaps())
                .map(|j| {
                    let (ga, gb) = sys.gap(j);
                    let y = ga + (gb - ga) * (i as f64 + 0.5) / 20.0;
                    let d: i8 = if (i + j) % 2 == 0 { 1 } else { -1 };
                    (y, d)
                })
                .collect();
            let pair = divisor_to_pair(&sys, &GapDivisor::new(&sys, pts)?)?;
            let (a, b) = tau_exact(&sys, &pair);
            let pair2 = tau_inverse(&sys, &a, &b)?;
            worst = worst
                .max(coeff_dist(&pair.f, &pair2.f))
                .max(coeff_dist(&pair.g, &pair2.g));
        }
    }
    Ok(vec![row("tau-roundtrip.identity", worst, 1e-8)])
}

fn family_residual_rows() -> Result<Vec<CriterionReport>> {
    let mut iso_worst = 0.0f64;
    // A mass point at y injects noise growing like e^{n g(y)} into the
    // quadrature moments, so the atoms here sit where g is small enough
    // to stay below the residual tolerance through site 101.
    let configs = [
        (sym2()?, vec![(0.0, -1)]),
        (sym2()?, vec![(0.45, 1)]),
        (three()?, vec![(-0.35, 1), (0.45, -1)]),
    ];
    for (sys, pts) in configs {
        let div = GapDivisor::new(&sys, pts)?;
        let dm = discretize(&MeasureSpec::isospectral_of(&sys, &div), 1024)?;
        let rt = stieltjes(&dm, 110)?;
        let l = sys.bands();
        for n in 5..=100 {
            for m in [l, l + 1] {
                let mw = moment_window(&dm, &rt, n, m)?;
                let (rm, rc) = window_residuals(&sys, &mw)?;
                iso_worst = rm
                    .iter()
                    .chain(rc.iter())
                    .fold(iso_worst, |mx, v| mx.max(v.abs()));
            }
        }
    }

    let sys = sym2()?;
    let szego = MeasureSpec {
        endpoints: sys.endpoints().to_vec(),
        weight: WeightKind::PolyTimesEquilibrium {
            coeffs: vec![0.249001, -0.998, 1.0],
        },
        point_masses: Vec::new(),
    };
    let dm = discretize(&szego, 2048)?;
    let rt = stieltjes(&dm, 205)?;
    let l = sys.bands();
    let residual_at = |n: usize| -> Result<f64> {
        let mw = moment_window(&dm, &rt, n, l)?;
        let (rm, rc) = window_residuals(&sys, &mw)?;
        Ok(rm.iter().chain(rc.iter()).fold(0.0, |mx, v| mx.max(v.abs())))
    };
    let r50 = residual_at(50)?;
    let r100 = residual_at(100)?;
    let r200 = residual_at(200)?;
    Ok(vec![
        row("family-residuals.isospectral", iso_worst, 1e-8),
        row("family-residuals.szego-tail", r200, 1e-2),
        row(
            "family-residuals.szego-trend",
            (r100 / r50).max(r200 / r100),
            1.0,
        ),
    ])
}

fn zero_family_rows() -> Result<Vec<CriterionReport>> {
    let sys = sym2()?;
    let depth = 60 + 2 + 160;
    let mut position = 0.0f64;
    let mut crowding = 0.0f64;
    let mut faults = 0.0f64;

    // Atom-free member: the window's sheet sign names the family that
    // carries the gap zero at every site.
    let div_free = GapDivisor::new(&sys, vec![(0.0, -1)])?;
    let dm_free = discretize(&MeasureSpec::isospectral_of(&sys, &div_free), 1024)?;
    let rt_free = stieltjes(&dm_free, depth)?;
    for n in 50..=60 {
        let zs = gap_zeros(&rt_free, &sys, n)?[0];
        let mw = moment_window(&dm_free, &rt_free, n, 1)?;
        let (pair, _) = extract_pair(&sys, &mw)?;
        let named = pair_to_divisor(&sys, &pair)?;
        let (y_hat, delta_hat) = named.points()[0];
        let predicted = match delta_hat {
            -1 => zs.p,
            1 => zs.q,
            _ => None,
        };
        match predicted {
            Some(z) => position = position.max((z - y_hat).abs()),
            None => faults += 1.0,
        }
        if let (Some(zp), Some(zq)) = (zs.p, zs.q) {
            crowding = crowding.max(1e-6 / (zp - zq).abs());
        }
    }

    // Mass-carrying member: the second-kind function has a pole at the
    // divisor point, never a zero, and any first-kind zero pins to it.
    let div_atom = GapDivisor::new(&sys, vec![(0.0, 1)])?;
    let dm_atom = discretize(&MeasureSpec::isospectral_of(&sys, &div_atom), 1024)?;
    let rt_atom = stieltjes(&dm_atom, depth)?;
    for n in 50..=60 {
        let zs = gap_zeros(&rt_atom, &sys, n)?[0];
        if zs.q.is_some() {
            faults += 1.0;
        }
        if let Some(zp) = zs.p {
            position = position.max(zp.abs());
        }
        if let (Some(zp), Some(zq)) = (zs.p, zs.q) {
            crowding = crowding.max(1e-6 / (zp - zq).abs());
        }
    }
    Ok(vec![
        row("zero-families.position", position, 1e-3),
        row("zero-families.separation", crowding, 1.0),
        row("zero-families.assignment", faults, 0.0),
    ])
}

fn shift_rows() -> Result<Vec<CriterionReport>> {
    let sys = sym2()?;
    let eq = equilibrium(&sys, 800)?;
    let mut involution = 0.0f64;
    for (y, d) in [(0.0, 1i8), (0.0, -1), (0.3, 1), (-0.2, -1)] {
        let pair = divisor_to_pair(&sys, &GapDivisor::new(&sys, vec![(y, d)])?)?;
        let (a, b) = tau_exact(&sys, &pair);
        let w = imap_inverse(1, &[a[0], b[0]])?;
        let w2 = shift_window(&eq, &w)?;
        let w4 = shift_window(&eq, &w2)?;
        involution = involution.max(w.distance(&w4));
    }
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 2048)?;
    let rt = stieltjes(&dm, 120)?;
    let mut predicted = 0.0f64;
    for n in (50..=100).step_by(10) {
        let w = window_from_table(&rt, n, 1)?;
        let pred = shift_window(&eq, &w)?;
        let actual = window_from_table(&rt, n + 1, 1)?;
        predicted = predicted.max(pred.distance(&actual));
    }
    Ok(vec![
        row("one-step-shift.involution", involution, 1e-8),
        row("one-step-shift.prediction", predicted, 1e-3),
    ])
}

fn equidistribution_rows() -> Result<Vec<CriterionReport>> {
    let sys = golden()?;
    let eq = equilibrium(&sys, 600)?;
    let div = GapDivisor::new(&sys, vec![(1.5, 1)])?;
    let (_, track) = torus_orbit(&eq, &div, 2000)?;
    let pts: Vec<Vec<f64>> = track.theta.iter().map(|t| vec![t[0]]).collect();
    let d_star = star_discrepancy(&pts)?;
    let w = [eq.omega_inf[0]];
    let mut eps = 0.05;
    let mut gaps: Vec<f64> = Vec::new();
    for _ in 0..4 {
        let rep = select_subsequence(&w, &[0.37], eps, 100_000)?;
        gaps.push(rep.max_gap.map_or(f64::INFINITY, |g| g as f64));
        eps *= 0.5;
    }
    let growth = if gaps.iter().any(|g| !g.is_finite()) {
        f64::INFINITY
    } else {
        gaps.windows(2).map(|p| p[0] / p[1]).fold(0.0, fold_max)
    };
    Ok(vec![
        row("equidistribution.discrepancy", d_star, 0.05),
        row("equidistribution.return-gaps", growth, 1.0),
    ])
}
