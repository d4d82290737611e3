use fgl_core::divisor::GapDivisor;
use fgl_core::geometry::IntervalSystem;
use fgl_core::measure::{
    discretize, isospectral_atom, isospectral_measure, szego_integral, MeasureSpec, WeightKind,
};
use fgl_core::orthopoly::{
    gap_zeros, gap_zeros_of_p, green_entries, markov_value, orthonormal_values, stieltjes,
    weyl_values, wronskian,
};

fn sym2() -> IntervalSystem {
    IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap()
}

#[test]
fn measure_spec_json_round_trip() {
    let text = r#"{
        "endpoints": [-1.0, -0.5, 0.5, 1.0],
        "weight": {"kind": "isospectral", "divisor": [{"y": 0.0, "delta": 1}]},
        "point_masses": [{"position": 2.0, "mass": 0.25}]
    }"#;
    let spec = MeasureSpec::from_json(text).unwrap();
    match &spec.weight {
        WeightKind::Isospectral { divisor } => {
            assert_eq!(divisor.len(), 1);
            assert_eq!(divisor[0].delta, 1);
        }
        _ => panic!("wrong weight kind"),
    }
    let again = MeasureSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(again.endpoints, spec.endpoints);
    assert_eq!(again.point_masses.len(), 1);
}

#[test]
fn measure_spec_rejects_malformed_input() {
    let cases = [
        // Not JSON at all.
        "not json",
        // Wrong arity.
        r#"{"endpoints": [0.0, 1.0, 2.0], "weight": {"kind": "equilibrium"}}"#,
        // Decreasing endpoints.
        r#"{"endpoints": [1.0, 0.0], "weight": {"kind": "equilibrium"}}"#,
        // Unknown weight kind.
        r#"{"endpoints": [0.0, 1.0], "weight": {"kind": "lebesgue"}}"#,
        // Unknown top-level field.
        r#"{"endpoints": [0.0, 1.0], "weight": {"kind": "equilibrium"}, "extra": 1}"#,
        // Sheet sign out of range.
        r#"{"endpoints": [-1.0, -0.5, 0.5, 1.0],
            "weight": {"kind": "isospectral", "divisor": [{"y": 0.0, "delta": 2}]}}"#,
        // Interior divisor point with sheet sign zero.
        r#"{"endpoints": [-1.0, -0.5, 0.5, 1.0],
            "weight": {"kind": "isospectral", "divisor": [{"y": 0.0, "delta": 0}]}}"#,
        // Divisor point outside its gap.
        r#"{"endpoints": [-1.0, -0.5, 0.5, 1.0],
            "weight": {"kind": "isospectral", "divisor": [{"y": 0.7, "delta": 1}]}}"#,
        // Point mass on the bands.
        r#"{"endpoints": [0.0, 1.0], "weight": {"kind": "equilibrium"},
            "point_masses": [{"position": 0.5, "mass": 0.1}]}"#,
        // Nonpositive mass.
        r#"{"endpoints": [0.0, 1.0], "weight": {"kind": "equilibrium"},
            "point_masses": [{"position": 2.0, "mass": 0.0}]}"#,
        // Polynomial weight that dips negative on a band.
        r#"{"endpoints": [-1.0, 1.0],
            "weight": {"kind": "poly_times_equilibrium", "coeffs": [0.1, 1.0]}}"#,
        // Empty polynomial.
        r#"{"endpoints": [-1.0, 1.0],
            "weight": {"kind": "poly_times_equilibrium", "coeffs": []}}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        assert!(MeasureSpec::from_json(text).is_err(), "case {i} should fail");
    }
}

#[test]
fn equilibrium_measure_has_unit_mass() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 200).unwrap();
    assert!((dm.total_mass() - 1.0).abs() < 1e-12);
    assert!(dm.weights.iter().all(|w| *w > 0.0));
    // First moment vanishes by symmetry.
    assert!(dm.integrate(|x| x).abs() < 1e-13);
}

#[test]
fn isospectral_masses_on_symmetric_two_band() {
    let sys = sym2();
    // Upper sheet at the gap center: atom of mass 1/2 there, total 9/16.
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    assert!((isospectral_atom(&sys, &div, 0) - 0.5).abs() < 1e-14);
    let dm = isospectral_measure(&sys, &div, 240).unwrap();
    assert!((dm.total_mass() - 9.0 / 16.0).abs() < 1e-12);
    // Lower sheet: no atom, total 1/16.
    let div = GapDivisor::new(&sys, vec![(0.0, -1)]).unwrap();
    assert_eq!(isospectral_atom(&sys, &div, 0), 0.0);
    let dm = isospectral_measure(&sys, &div, 240).unwrap();
    assert!((dm.total_mass() - 1.0 / 16.0).abs() < 1e-12);
    // Edge divisor: a.c. part only, finite positive mass.
    let div = GapDivisor::new(&sys, vec![(-0.5, 0)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 240).unwrap();
    assert!(dm.total_mass() > 0.0);
}

#[test]
fn chebyshev_recurrence_from_discretization() {
    let sys = IntervalSystem::new(vec![-1.0, 1.0]).unwrap();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 1200).unwrap();
    let rt = stieltjes(&dm, 40).unwrap();
    assert!((rt.lambda_n(1) - 1.0).abs() < 1e-12);
    assert!((rt.lambda_n(2) - 0.5).abs() < 1e-10);
    for n in 3..=20 {
        assert!((rt.lambda_n(n) - 0.25).abs() < 1e-10, "lambda_{n}");
    }
    for n in 1..=20 {
        assert!(rt.alpha_n(n).abs() < 1e-12, "alpha_{n}");
    }
}

#[test]
fn stieltjes_vectors_stay_orthonormal() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 400).unwrap();
    let rt = stieltjes(&dm, 60).unwrap();
    // Spot check: discrete orthonormality of P_i against P_j.
    for (i, j) in [(0usize, 0usize), (3, 3), (10, 10), (0, 7), (5, 12), (20, 40)] {
        let n = i.max(j);
        let acc: f64 = dm
            .nodes
            .iter()
            .zip(&dm.weights)
            .map(|(x, w)| {
                let p = orthonormal_values(&rt, n, *x).unwrap();
                w * p[i] * p[j]
            })
            .sum();
        let want = if i == j { 1.0 } else { 0.0 };
        assert!((acc - want).abs() < 1e-9, "({i},{j}) -> {acc}");
    }
}

#[test]
fn second_kind_values_match_direct_sums_at_low_order() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 400).unwrap();
    let rt = stieltjes(&dm, 80).unwrap();
    for &z in &[0.0, 0.3, -0.2, 1.7, -2.4] {
        let q = weyl_values(&rt, 6, z).unwrap();
        for n in 0..=6 {
            let direct: f64 = dm
                .nodes
                .iter()
                .zip(&dm.weights)
                .map(|(x, w)| {
                    let p = orthonormal_values(&rt, n, *x).unwrap();
                    w * p[n] / (z - x)
                })
                .sum();
            assert!(
                (q[n] - direct).abs() < 1e-10 * (1.0 + direct.abs()),
                "Q_{n}({z}): {} vs {direct}",
                q[n]
            );
        }
        assert!((q[0] * rt.lambda_n(1).sqrt() - markov_value(&dm, z)).abs() < 1e-12);
    }
}

#[test]
fn wronskian_is_minus_one_and_green_entries_split() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 500).unwrap();
    let rt = stieltjes(&dm, 120).unwrap();
    for &z in &[0.0, 0.35, -0.4] {
        for &n in &[0usize, 1, 5, 20, 60] {
            let w = wronskian(&rt, n, z).unwrap();
            assert!((w + 1.0).abs() < 1e-9, "n={n}, z={z}: {w}");
            let (_, lower, upper) = green_entries(&rt, n, z).unwrap();
            let gap = upper - lower;
            assert!(
                (gap - 1.0 / rt.lambda_n(n + 2).sqrt()).abs() < 1e-9,
                "resolvent split at n={n}, z={z}"
            );
        }
    }
}

#[test]
fn strip_shifts_the_table() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 400).unwrap();
    let rt = stieltjes(&dm, 30).unwrap();
    let s = rt.strip(3).unwrap();
    assert!((s.alpha_n(1) - rt.alpha_n(4)).abs() < 1e-15);
    assert!((s.lambda_n(1) - rt.lambda_n(4)).abs() < 1e-15);
    assert!(rt.strip(30).is_err());
}

#[test]
fn polynomial_zeros_fall_in_gaps_for_isospectral_measures() {
    let sys = sym2();
    let div = GapDivisor::new(&sys, vec![(0.1, -1)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 500).unwrap();
    let rt = stieltjes(&dm, 80).unwrap();
    // The orbit under coefficient stripping has period two here, so the
    // gap zero of P_n sits pinned on the divisor point at odd n; at even n
    // the point belongs to the second-kind family and P_n has no gap zero.
    for n in [39usize, 41, 51, 61] {
        let z = gap_zeros_of_p(&rt, &sys, n, 2048).unwrap()[0]
            .expect("odd-order polynomials carry the gap zero");
        assert!((z - 0.1).abs() < 5e-3, "n={n}: {z}");
    }
    for n in [40usize, 50, 60] {
        assert!(gap_zeros_of_p(&rt, &sys, n, 2048).unwrap()[0].is_none());
    }
}

#[test]
fn zero_families_alternate_on_the_centered_orbit() {
    let sys = sym2();
    let div = GapDivisor::new(&sys, vec![(0.0, -1)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 1024).unwrap();
    let rt = stieltjes(&dm, 61 + 2 + 160).unwrap();
    // Odd order pins the polynomial zero on the divisor point, even order
    // hands it to the second-kind family; the two never appear together.
    let odd = gap_zeros(&rt, &sys, 61).unwrap()[0];
    assert!(odd.p.unwrap().abs() < 1e-9, "{odd:?}");
    assert!(odd.q.is_none(), "{odd:?}");
    let even = gap_zeros(&rt, &sys, 60).unwrap()[0];
    assert!(even.q.unwrap().abs() < 1e-9, "{even:?}");
    assert!(even.p.is_none(), "{even:?}");
    // The scan insists on its truncation buffer.
    assert!(gap_zeros(&rt, &sys, rt.len() - 30).is_err());
}

#[test]
fn mass_point_shows_as_a_pole_not_a_zero() {
    let sys = sym2();
    // The companion divisor carries an atom of mass 1/2 at the divisor
    // point itself. The second-kind transform then has a pole at 0 whose
    // sign change must not be mistaken for a zero, and the polynomial
    // value at 0 decays without crossing at even order.
    let div = GapDivisor::new(&sys, vec![(0.0, 1)]).unwrap();
    let dm = isospectral_measure(&sys, &div, 1024).unwrap();
    assert!((dm.total_mass() - 9.0 / 16.0).abs() < 1e-12);
    let rt = stieltjes(&dm, 61 + 2 + 160).unwrap();
    // The second-kind family never vanishes in the gap; the polynomial
    // value at the atom is pinned exponentially small, and whenever its
    // sign opposes the surrounding values a zero pair straddles the atom.
    for n in [50usize, 51, 60, 61] {
        let gz = gap_zeros(&rt, &sys, n).unwrap()[0];
        assert!(gz.q.is_none(), "n={n}: {gz:?}");
        if let Some(zp) = gz.p {
            assert!(zp.abs() < 1e-9, "n={n}: {gz:?}");
        }
    }
    // Parity puts an exact polynomial zero on the atom at odd order, and
    // the straddling pair is resolved at order 60.
    for n in [51usize, 60, 61] {
        assert!(gap_zeros(&rt, &sys, n).unwrap()[0].p.is_some(), "n={n}");
    }
}

#[test]
fn equilibrium_gap_zeros_sit_at_the_symmetry_point() {
    let sys = sym2();
    let dm = discretize(&MeasureSpec::equilibrium_of(&sys), 1024).unwrap();
    let rt = stieltjes(&dm, 61 + 2 + 160).unwrap();
    let odd = gap_zeros(&rt, &sys, 61).unwrap()[0];
    assert!(odd.p.unwrap().abs() < 1e-10, "{odd:?}");
    let even = gap_zeros(&rt, &sys, 60).unwrap()[0];
    assert!(even.q.unwrap().abs() < 1e-8, "{even:?}");
}

#[test]
fn szego_integral_arc_sine_oracle() {
    // For the single band [-1,1] the equilibrium density is the arcsine
    // law; its Szego integral is log(2/pi).
    let sys = IntervalSystem::new(vec![-1.0, 1.0]).unwrap();
    let spec = MeasureSpec::equilibrium_of(&sys);
    let v = szego_integral(&spec, 400).unwrap();
    assert!((v - (2.0 / std::f64::consts::PI).ln()).abs() < 1e-10);
    // Scaling the weight by a constant shifts the integral by its log.
    let spec2 = MeasureSpec {
        endpoints: vec![-1.0, 1.0],
        weight: WeightKind::PolyTimesEquilibrium { coeffs: vec![3.0] },
        point_masses: vec![],
    };
    let v2 = szego_integral(&spec2, 400).unwrap();
    assert!((v2 - v - 3.0f64.ln()).abs() < 1e-10);
}
