use fgl_core::dynamics::{
    rotation_residuals, select_subsequence, star_discrepancy, theta_sequence, torus_orbit,
    window_convergence,
};
use fgl_core::equilibrium::equilibrium;
use fgl_core::measure::{discretize, MeasureSpec};
use fgl_core::orthopoly::stieltjes;
use fgl_core::{GapDivisor, IntervalSystem};

fn sym2() -> IntervalSystem {
    IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap()
}

fn golden() -> IntervalSystem {
    IntervalSystem::new(vec![0.0, 1.0, 2.0, 4.597769030755]).unwrap()
}

#[test]
fn exact_orbit_obeys_the_rotation_law() {
    let sys = sym2();
    let eq = equilibrium(&sys, 600).unwrap();
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    let (orbit, track) = torus_orbit(&eq, &div, 4).unwrap();
    assert_eq!(orbit.len(), 5);
    // Period two: the sheet flips and flips back.
    for (i, d) in orbit.iter().enumerate() {
        let (y, delta) = d.points()[0];
        assert!(y.abs() < 1e-9);
        assert_eq!(delta, if i % 2 == 0 { 1 } else { -1 });
    }
    // Phases alternate between the two quarter points.
    for (i, th) in track.theta.iter().enumerate() {
        let want = if i % 2 == 0 { 0.25 } else { 0.75 };
        assert!((th[0] - want).abs() < 1e-9, "step {i}: {:?}", th);
        assert!((th[1] - want).abs() < 1e-9);
    }
    let res = rotation_residuals(&track, &eq.omega_inf).unwrap();
    assert_eq!(res.len(), 4);
    assert!(res.iter().all(|r| *r < 1e-7));
}

#[test]
fn theta_sequence_reports_the_edge_convention() {
    let sys = sym2();
    let eq = equilibrium(&sys, 600).unwrap();
    let left = GapDivisor::new(&sys, vec![(-0.5, 0)]).unwrap();
    let right = GapDivisor::new(&sys, vec![(0.5, 0)]).unwrap();
    let track = theta_sequence(&eq, 0, &[left, right]).unwrap();
    assert!((track.theta[0][0] - 0.5).abs() < 1e-12);
    assert!(track.theta[0][1].abs() < 1e-12);
    assert!(track.theta[1][0].abs() < 1e-12);
    assert!((track.theta[1][1] - 0.5).abs() < 1e-12);
    // The edge orbit itself satisfies the rotation law.
    let res = rotation_residuals(&track, &eq.omega_inf).unwrap();
    assert!(res[0] < 1e-12);
}

#[test]
fn rational_rotation_scan_hits_the_even_integers() {
    let rep = select_subsequence(&[0.5], &[0.0], 1e-9, 20).unwrap();
    assert_eq!(rep.indices, vec![0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20]);
    assert_eq!(rep.max_gap, Some(2));
    assert!(rep.gaps.iter().all(|g| *g == 2));
    // The two-point orbit never comes near 0.3.
    let rep = select_subsequence(&[0.5], &[0.3], 0.05, 1000).unwrap();
    assert!(rep.indices.is_empty());
    assert_eq!(rep.max_gap, None);
    assert!(select_subsequence(&[0.5], &[0.0], 0.0, 10).is_err());
    assert!(select_subsequence(&[0.5], &[0.0, 0.1], 0.1, 10).is_err());
}

#[test]
fn golden_rotation_gaps_grow_as_the_window_shrinks() {
    let sys = golden();
    let eq = equilibrium(&sys, 600).unwrap();
    let w = [eq.omega_inf[0]];
    assert!((w[0] - 0.3819660112501051).abs() < 1e-9);
    let mut eps = 0.05;
    let mut last_gap = 0usize;
    for _ in 0..4 {
        let rep = select_subsequence(&w, &[0.37], eps, 100_000).unwrap();
        assert!(!rep.indices.is_empty());
        let g = rep.max_gap.unwrap();
        assert!(
            g > last_gap,
            "max gap {g} did not grow past {last_gap} at eps {eps}"
        );
        last_gap = g;
        eps *= 0.5;
    }
}

#[test]
fn orbit_phases_equidistribute_on_the_golden_system() {
    let sys = golden();
    let eq = equilibrium(&sys, 600).unwrap();
    let div = GapDivisor::new(&sys, vec![(1.5, 1)]).unwrap();
    let (_, track) = torus_orbit(&eq, &div, 2000).unwrap();
    let pts: Vec<Vec<f64>> = track.theta.iter().map(|t| vec![t[0]]).collect();
    let d_full = star_discrepancy(&pts).unwrap();
    let d_early = star_discrepancy(&pts[..201]).unwrap();
    assert!(d_full < 0.05, "K=2000 discrepancy {d_full}");
    assert!(d_full < d_early, "no refinement: {d_early} -> {d_full}");
}

#[test]
fn window_diameter_separates_subsequences() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 800).unwrap();
    let rt = stieltjes(&dm, 105).unwrap();
    let even: Vec<usize> = (40..=100).step_by(2).collect();
    let all: Vec<usize> = (40..=100).collect();
    let d_even = window_convergence(&rt, &even, 2).unwrap();
    let d_all = window_convergence(&rt, &all, 2).unwrap();
    assert!(d_even < 1e-4, "even-index diameter {d_even}");
    assert!(d_all > 0.4, "mixed-index diameter {d_all}");
    assert!(window_convergence(&rt, &[], 2).is_err());
    assert!(window_convergence(&rt, &even, 1).is_err());
    assert!(window_convergence(&rt, &[104], 2).is_err());
}

#[test]
fn star_discrepancy_matches_closed_forms() {
    // Centered lattice in one dimension: D* = 1/(2N).
    let pts: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64 / 4.0 + 0.125]).collect();
    assert!((star_discrepancy(&pts).unwrap() - 0.125).abs() < 1e-15);
    let one = vec![vec![0.0]];
    assert!((star_discrepancy(&one).unwrap() - 1.0).abs() < 1e-15);
    // A clumped planar set is far from uniform.
    let clump: Vec<Vec<f64>> = (0..256).map(|_| vec![0.5, 0.5]).collect();
    assert!(star_discrepancy(&clump).unwrap() > 0.7);
    // A centered planar lattice is close to uniform.
    let mut lat = Vec::new();
    for i in 0..16 {
        for j in 0..16 {
            lat.push(vec![i as f64 / 16.0 + 1.0 / 32.0, j as f64 / 16.0 + 1.0 / 32.0]);
        }
    }
    assert!(star_discrepancy(&lat).unwrap() < 0.15);
    assert!(star_discrepancy(&[]).is_err());
    assert!(star_discrepancy(&[vec![1.0]]).is_err());
    assert!(star_discrepancy(&[vec![0.5], vec![0.5, 0.5]]).is_err());
}

#[test]
fn residuals_need_consecutive_phases() {
    let sys = sym2();
    let eq = equilibrium(&sys, 400).unwrap();
    let div = GapDivisor::new(&sys, vec![(0.2, 1)]).unwrap();
    let track = theta_sequence(&eq, 5, &[div]).unwrap();
    assert_eq!(track.start, 5);
    assert_eq!(track.len(), 1);
    assert!(rotation_residuals(&track, &eq.omega_inf).is_err());
}
