use fgl_core::equilibrium::equilibrium;
use fgl_core::measure::{discretize, isospectral_measure, MeasureSpec};
use fgl_core::orthopoly::{stieltjes, RecurrenceTable};
use fgl_core::pell::{pair_to_divisor, pell_step};
use fgl_core::windows::{
    extract_pair, imap, imap_inverse, moment_window, shift_window, window_from_table,
    window_residuals, CoeffWindow, MomentWindow,
};
use fgl_core::{GapDivisor, IntervalSystem};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym2() -> IntervalSystem {
    IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap()
}

fn three() -> IntervalSystem {
    IntervalSystem::new(vec![-2.0, -1.2, -0.3, 0.4, 1.1, 2.2]).unwrap()
}

fn worst(rm: &[f64], rc: &[f64]) -> f64 {
    rm.iter().chain(rc).fold(0.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn window_cut_is_centered_on_the_site() {
    let rt = RecurrenceTable {
        alpha: (1..=30).map(|i| i as f64).collect(),
        lambda: (1..=30).map(|i| 100.0 + i as f64).collect(),
    };
    // Order m reaches alpha indices [1-(m-1)/2, m/2+1] and lambda indices
    // [2-m/2, (m-1)/2+2] relative to the site, each shifted by n.
    let w = window_from_table(&rt, 10, 1).unwrap();
    assert_eq!(w.xs(), &[11.0]);
    assert_eq!(w.ys(), &[112.0]);
    let w = window_from_table(&rt, 10, 2).unwrap();
    assert_eq!(w.xs(), &[11.0, 12.0]);
    assert_eq!(w.ys(), &[111.0, 112.0]);
    let w = window_from_table(&rt, 10, 3).unwrap();
    assert_eq!(w.xs(), &[10.0, 11.0, 12.0]);
    assert_eq!(w.ys(), &[111.0, 112.0, 113.0]);
    let w = window_from_table(&rt, 10, 4).unwrap();
    assert_eq!(w.xs(), &[10.0, 11.0, 12.0, 13.0]);
    assert_eq!(w.ys(), &[110.0, 111.0, 112.0, 113.0]);
    let w = window_from_table(&rt, 10, 5).unwrap();
    assert_eq!(w.xs(), &[9.0, 10.0, 11.0, 12.0, 13.0]);
    assert_eq!(w.ys(), &[110.0, 111.0, 112.0, 113.0, 114.0]);
    // Order 3 already looks one site left of n = 0.
    assert!(window_from_table(&rt, 0, 3).is_err());
    assert!(window_from_table(&rt, 29, 2).is_err());
}

#[test]
fn base_window_is_its_own_invariant() {
    let w = CoeffWindow::new(vec![0.37], vec![0.81]).unwrap();
    let inv = imap(&w).unwrap();
    assert_eq!(inv, vec![0.37, 0.81]);
    let back = imap_inverse(1, &inv).unwrap();
    assert_eq!(back.xs(), &[0.37]);
    assert_eq!(back.ys(), &[0.81]);
}

#[test]
fn invariants_are_the_site_moments() {
    let sys = sym2();
    let spec = MeasureSpec::equilibrium_of(&sys);
    let dm = discretize(&spec, 800).unwrap();
    let rt = stieltjes(&dm, 50).unwrap();
    let n = 40;
    let m = 4;
    let w = window_from_table(&rt, n, m).unwrap();
    let inv = imap(&w).unwrap();
    let mw = moment_window(&dm, &rt, n, m).unwrap();
    for j in 1..=m {
        assert!(
            (inv[2 * j - 2] - mw.mu[j]).abs() < 1e-8,
            "mu_{j}: path sum {} vs quadrature {}",
            inv[2 * j - 2],
            mw.mu[j]
        );
        assert!(
            (inv[2 * j - 1] - mw.nu[j]).abs() < 1e-8,
            "nu_{j}: path sum {} vs quadrature {}",
            inv[2 * j - 1],
            mw.nu[j]
        );
    }
    // Low orders in closed form.
    let a1 = rt.alpha[n];
    let a2 = rt.alpha[n + 1];
    let l1 = rt.lambda[n];
    let l2 = rt.lambda[n + 1];
    assert!((mw.mu[1] - a1).abs() < 1e-10);
    assert!((mw.nu[1] - l2).abs() < 1e-10);
    assert!((mw.mu[2] - (l1 + a1 * a1 + l2)).abs() < 1e-10);
    assert!((mw.nu[2] - l2 * (a1 + a2)).abs() < 1e-10);
    assert!((mw.lambda_next - l2).abs() == 0.0);
}

#[test]
fn moment_window_rejects_a_foreign_table() {
    let sys = sym2();
    let dm_eq = discretize(&MeasureSpec::equilibrium_of(&sys), 400).unwrap();
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    let dm_iso = isospectral_measure(&sys, &div, 400).unwrap();
    let rt_eq = stieltjes(&dm_eq, 20).unwrap();
    assert!(moment_window(&dm_iso, &rt_eq, 5, 2).is_err());
    assert!(moment_window(&dm_eq, &rt_eq, 5, 0).is_err());
    assert!(moment_window(&dm_eq, &rt_eq, 19, 2).is_err());
}

#[test]
fn roundtrip_recovers_seeded_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=4usize {
        for _ in 0..100 {
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let y: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..=1.0)).collect();
            let w = CoeffWindow::new(x, y).unwrap();
            let back = imap_inverse(m, &imap(&w).unwrap()).unwrap();
            assert!(
                w.distance(&back) < 1e-10,
                "order {m} roundtrip drifted by {}",
                w.distance(&back)
            );
        }
    }
    // Conditioning degrades slowly with the order; the peel stays tight
    // well past the sizes the divisor map needs.
    for m in 5..=6usize {
        for _ in 0..100 {
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let y: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..=1.0)).collect();
            let w = CoeffWindow::new(x, y).unwrap();
            let back = imap_inverse(m, &imap(&w).unwrap()).unwrap();
            assert!(w.distance(&back) < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn roundtrip_property(
        x in proptest::collection::vec(-1.0f64..1.0, 4),
        y in proptest::collection::vec(0.05f64..1.0, 4),
    ) {
        let w = CoeffWindow::new(x, y).unwrap();
        let back = imap_inverse(4, &imap(&w).unwrap()).unwrap();
        prop_assert!(w.distance(&back) < 1e-9);
    }
}

#[test]
fn inverse_rejects_out_of_range_invariants() {
    assert!(imap_inverse(1, &[0.3, -0.1]).is_err());
    assert!(imap_inverse(1, &[0.3, 0.0]).is_err());
    assert!(imap_inverse(2, &[0.3, 0.1]).is_err());
    let w = CoeffWindow::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
    let mut inv = imap(&w).unwrap();
    // Third invariant is y_1 + x_1^2 + y_2; push it below the reachable
    // range so the recovered left coupling turns negative.
    inv[2] = 0.1f64 * 0.1 + 0.4 - 0.5;
    assert!(imap_inverse(2, &inv).is_err());
    assert!(CoeffWindow::new(vec![0.0], vec![0.0]).is_err());
    assert!(CoeffWindow::new(vec![0.0, 0.0], vec![0.5]).is_err());
}

#[test]
fn extraction_names_the_limit_pair() {
    let sys = sym2();
    // Moments of the two period-two limit tables.
    for (lam, f0) in [(9.0 / 16.0, 0.5), (1.0 / 16.0, -0.5)] {
        let mw = MomentWindow {
            n: 0,
            mu: vec![1.0, 0.0],
            nu: vec![0.0, lam],
            lambda_next: lam,
        };
        let (pair, drift) = extract_pair(&sys, &mw).unwrap();
        assert!(drift < 1e-14);
        assert!((pair.g.coeff(1) - 1.0).abs() < 1e-10);
        assert!(pair.g.coeff(0).abs() < 1e-10);
        assert!((pair.f.coeff(2) - 1.0).abs() < 1e-10);
        assert!(pair.f.coeff(1).abs() < 1e-10);
        assert!((pair.f.coeff(0) - f0).abs() < 1e-10);
    }
    let short = MomentWindow {
        n: 0,
        mu: vec![1.0],
        nu: vec![0.0],
        lambda_next: 0.5,
    };
    assert!(extract_pair(&three(), &short).is_err());
}

#[test]
fn extraction_from_a_single_band_table() {
    let sys = IntervalSystem::new(vec![-0.8, 1.2]).unwrap();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 600).unwrap();
    let rt = stieltjes(&dm, 20).unwrap();
    let mw = moment_window(&dm, &rt, 10, 2).unwrap();
    let (pair, drift) = extract_pair(&sys, &mw).unwrap();
    assert!(drift < 1e-10);
    assert_eq!(pair.g.degree(), 0);
    assert!((pair.g.coeff(0) - 1.0).abs() < 1e-8);
    assert!((pair.f.coeff(1) - 1.0).abs() < 1e-8);
    assert!((pair.f.coeff(0) + 0.2).abs() < 1e-8);
}

#[test]
fn equilibrium_window_extraction_pins_the_gap_zero() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 800).unwrap();
    let rt = stieltjes(&dm, 85).unwrap();
    let mw = moment_window(&dm, &rt, 80, 1).unwrap();
    let (pair, drift) = extract_pair(&sys, &mw).unwrap();
    assert!(drift < 1e-8);
    let root = -pair.g.coeff(0) / pair.g.coeff(1);
    assert!(root.abs() < 2e-3, "gap zero drifted to {root}");
}

#[test]
fn gap_zero_parity_tracks_the_step() {
    let sys = sym2();
    let eq = equilibrium(&sys, 800).unwrap();
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 800).unwrap();
    let rt = stieltjes(&dm, 12).unwrap();
    let mut track = Vec::new();
    for n in 0..8 {
        let mw = moment_window(&dm, &rt, n, 1).unwrap();
        let (pair, _) = extract_pair(&sys, &mw).unwrap();
        let d = pair_to_divisor(&sys, &pair).unwrap();
        let (y, delta) = d.points()[0];
        assert!(y.abs() < 1e-8, "site {n} zero at {y}");
        // The site-0 window of this measure sits one step past the
        // divisor that built it, and the sheet alternates from there.
        let expect = if n % 2 == 0 { -1 } else { 1 };
        assert_eq!(delta, expect, "site {n}");
        track.push(d);
    }
    for n in 0..7 {
        let (next, _) = pell_step(&eq, &track[n]).unwrap();
        let (y1, d1) = next.points()[0];
        let (y2, d2) = track[n + 1].points()[0];
        assert!((y1 - y2).abs() < 1e-8);
        assert_eq!(d1, d2);
    }
}

#[test]
fn residuals_vanish_on_the_invariant_family() {
    let sys = sym2();
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 800).unwrap();
    let rt = stieltjes(&dm, 50).unwrap();
    for n in [5usize, 17, 40] {
        let mw = moment_window(&dm, &rt, n, 3).unwrap();
        let (rm, rc) = window_residuals(&sys, &mw).unwrap();
        assert_eq!(rm.len(), 2);
        assert_eq!(rc.len(), 1);
        assert!(worst(&rm, &rc) < 1e-10, "site {n}: {}", worst(&rm, &rc));
    }
    let tri = three();
    let dv3 = GapDivisor::new(&tri, vec![(-0.7, 1), (0.8, -1)]).unwrap();
    let dm3 = isospectral_measure(&tri, &dv3, 800).unwrap();
    let rt3 = stieltjes(&dm3, 50).unwrap();
    for n in [5usize, 20, 40] {
        let mw = moment_window(&dm3, &rt3, n, 4).unwrap();
        let (rm, rc) = window_residuals(&tri, &mw).unwrap();
        assert!(worst(&rm, &rc) < 1e-10, "site {n}: {}", worst(&rm, &rc));
    }
    // Single band: the tail conditions collapse to alpha = c_1 and
    // 2 lambda = (half width)^2 / 2.
    let one = IntervalSystem::new(vec![-0.8, 1.2]).unwrap();
    let dm1 = discretize(&MeasureSpec::equilibrium_of(&one), 600).unwrap();
    let rt1 = stieltjes(&dm1, 20).unwrap();
    let mw1 = moment_window(&dm1, &rt1, 5, 2).unwrap();
    let (rm, rc) = window_residuals(&one, &mw1).unwrap();
    assert!(worst(&rm, &rc) < 1e-10);
    assert!(window_residuals(&one, &moment_window(&dm1, &rt1, 5, 0).unwrap_or(mw1)).is_ok());
}

#[test]
fn equilibrium_windows_join_the_family_after_the_transient() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 800).unwrap();
    let rt = stieltjes(&dm, 50).unwrap();
    let res = |n: usize| {
        let mw = moment_window(&dm, &rt, n, 3).unwrap();
        let (rm, rc) = window_residuals(&sys, &mw).unwrap();
        worst(&rm, &rc)
    };
    // The low sites remember the free part of the measure; from site 6 on
    // the window rides the invariant family even though the entries are
    // still drifting toward the periodic limit.
    assert!(res(3) > 1e-3);
    assert!(res(6) < 1e-10);
    assert!(res(40) < 1e-10);
    assert!((rt.lambda[4] - 0.0625).abs() > 1e-3);
}

#[test]
fn shift_advances_one_site_along_the_table() {
    let sys = sym2();
    let eq = equilibrium(&sys, 800).unwrap();
    let w = CoeffWindow::new(vec![0.0], vec![9.0 / 16.0]).unwrap();
    let s1 = shift_window(&eq, &w).unwrap();
    assert!(s1.xs()[0].abs() < 1e-10);
    assert!((s1.ys()[0] - 1.0 / 16.0).abs() < 1e-10);
    let s2 = shift_window(&eq, &s1).unwrap();
    assert!(w.distance(&s2) < 1e-8, "period two broken: {:?}", s2.ys());

    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 800).unwrap();
    let rt = stieltjes(&dm, 70).unwrap();
    for n in [50usize, 60] {
        let wn = window_from_table(&rt, n, 1).unwrap();
        let wn1 = window_from_table(&rt, n + 1, 1).unwrap();
        let predicted = shift_window(&eq, &wn).unwrap();
        assert!(
            predicted.distance(&wn1) < 1e-3,
            "site {n} prediction off by {}",
            predicted.distance(&wn1)
        );
    }

    // Off the invariant family the defect keeps a remainder.
    let off = CoeffWindow::new(vec![0.3], vec![0.2]).unwrap();
    assert!(shift_window(&eq, &off).is_err());
    // Order must match the gap count.
    let wide = CoeffWindow::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
    assert!(shift_window(&eq, &wide).is_err());
    // One band has no gap coordinates to move.
    let one = IntervalSystem::new(vec![-1.0, 1.0]).unwrap();
    let eq1 = equilibrium(&one, 200).unwrap();
    assert!(shift_window(&eq1, &w).is_err());
}
