use fgl_core::geometry::{IntervalSystem, Region};

fn sym2() -> IntervalSystem {
    IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap()
}

#[test]
fn rejects_bad_endpoint_lists() {
    assert!(IntervalSystem::new(vec![]).is_err());
    assert!(IntervalSystem::new(vec![0.0]).is_err());
    assert!(IntervalSystem::new(vec![0.0, 1.0, 1.0, 2.0]).is_err());
    assert!(IntervalSystem::new(vec![0.0, 2.0, 1.0, 3.0]).is_err());
    assert!(IntervalSystem::new(vec![0.0, f64::NAN]).is_err());
    assert!(IntervalSystem::new(vec![0.0, f64::INFINITY]).is_err());
}

#[test]
fn locates_regions() {
    let s = sym2();
    assert_eq!(s.locate(-2.0), Region::LeftRay);
    assert_eq!(s.locate(-0.75), Region::Band(0));
    assert_eq!(s.locate(0.0), Region::Gap(0));
    assert_eq!(s.locate(0.75), Region::Band(1));
    assert_eq!(s.locate(2.0), Region::RightRay);
    assert_eq!(s.locate(-0.5), Region::Endpoint(1));
    assert_eq!(s.locate(1.0), Region::Endpoint(3));
}

// Oracle: track the branch of sqrt(H) along a semicircular path through the
// upper half plane from a point right of the last band to the target, by
// taking half the continuously-unwound argument sum of (z - a_i).
fn continued_branch_sign(endpoints: &[f64], x: f64) -> f64 {
    let (lo, hi) = (endpoints[0], *endpoints.last().unwrap());
    let c = 0.5 * (lo + hi);
    let r0 = 1.5 * (hi - lo);
    let steps = 20_000usize;
    // Start on the real axis right of everything (arguments all zero), rise
    // and slide to the vertical above x, then descend to x + i*eps. The
    // whole path keeps Im z >= 0, so each arg(z - a_i) stays in [0, pi] and
    // small-step unwrapping is safe.
    let mut prev: Vec<f64> = vec![0.0; endpoints.len()];
    let mut total = 0.0f64;
    let mut walk = |z_re: f64, z_im: f64, prev: &mut Vec<f64>| {
        let mut moved = 0.0;
        for (i, a) in endpoints.iter().enumerate() {
            let arg = z_im.atan2(z_re - a);
            let mut d = arg - prev[i];
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            moved += d;
            prev[i] = arg;
        }
        moved
    };
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let z_re = (c + r0) * (1.0 - t) + x * t;
        let z_im = r0 * (t * std::f64::consts::PI).sin().powi(2) + 1e-9;
        total += walk(z_re, z_im, &mut prev);
    }
    // z ended at x + i*eps; halve the unwound argument for sqrt.
    let re = (0.5 * total).cos();
    assert!(re.abs() > 0.99, "path ended too close to a branch point");
    if re > 0.0 {
        1.0
    } else {
        -1.0
    }
}

#[test]
fn branch_signs_match_upper_half_plane_continuation() {
    let sys = sym2();
    for &x in &[-2.0, 0.0, 2.0] {
        let tracked = continued_branch_sign(sys.endpoints(), x);
        let ours = sys.branch_value(x).signum();
        assert_eq!(ours, tracked, "branch sign at {x}");
    }
    let three = IntervalSystem::new(vec![-1.0, -0.6, -0.2, 0.2, 0.6, 1.0]).unwrap();
    for &x in &[-2.0, -0.4, 0.4, 2.0] {
        let tracked = continued_branch_sign(three.endpoints(), x);
        let ours = three.branch_value(x).signum();
        assert_eq!(ours, tracked, "branch sign at {x}");
    }
}

#[test]
fn branch_values_two_band_symmetric() {
    let s = sym2();
    // H(0) = (0+1)(0+0.5)(0-0.5)(0-1) = 1/4; branch in the single gap is
    // negative, so sqrt(H)(0) = -1/2.
    assert!((s.h_at(0.0) - 0.25).abs() < 1e-15);
    assert!((s.branch_value(0.0) + 0.5).abs() < 1e-15);
    // Right ray positive: H(2) = 3 * 2.5 * 1.5 * 1 = 11.25.
    assert!((s.branch_value(2.0) - 11.25f64.sqrt()).abs() < 1e-12);
    // Left ray: even band count, positive.
    assert!((s.branch_value(-2.0) - 11.25f64.sqrt()).abs() < 1e-12);
    // h on band interiors: negative on the first band, positive on the second.
    assert!(s.branch_value(-0.75) < 0.0);
    assert!(s.branch_value(0.75) > 0.0);
    assert!((s.branch_value(0.75).abs() - (-s.h_at(0.75)).sqrt()).abs() < 1e-15);
    // Endpoints are zeros.
    assert_eq!(s.branch_value(1.0), 0.0);
}

#[test]
fn cancellation_free_forms_agree_with_direct_products() {
    let s = sym2();
    let (ga, gb) = s.gap(0);
    let x = -0.3;
    let direct = s.gap_sign(0) * s.h_at(x).sqrt();
    let parts = s.gap_branch_from_parts(0, x, x - ga, gb - x);
    assert!((direct - parts).abs() < 1e-14);

    let xb = 0.77;
    let (ba, bb) = s.band(1);
    let direct_h = (-s.h_at(xb)).sqrt();
    let parts_h = s.band_abs_from_parts(1, xb, xb - ba, bb - xb);
    assert!((direct_h - parts_h).abs() < 1e-14);
}
