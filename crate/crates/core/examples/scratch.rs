use fgl_core::geometry::IntervalSystem;
use fgl_core::GapDivisor;
use fgl_core::measure::MeasureSpec;
use fgl_core::orthopoly::{orthonormal_values, weyl_values};
use fgl_core::discretize;
use fgl_core::stieltjes;

fn main() -> fgl_core::Result<()> {
    let sys = IntervalSystem::new(vec![-1.0, -0.5, 0.5, 1.0])?;
    let div = GapDivisor::new(&sys, vec![(0.0, 1)])?;
    let dm = discretize(&MeasureSpec::isospectral_of(&sys, &div), 1024)?;
    let rt = stieltjes(&dm, 222)?;

    for n in [52usize, 53] {
        println!("== n = {n} ==");
        for &ax in &[1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 0.0] {
            for &s in &[1.0, -1.0] {
                let x = s * ax;
                if x == -0.0 && s < 0.0 {
                    continue;
                }
                let p = orthonormal_values(&rt, n, x)?[n];
                let w = match weyl_values(&rt, n, x) {
                    Ok(v) => format!("{:+.6e}", v[n]),
                    Err(e) => format!("ERR {e}"),
                };
                println!("  x={x:+.3e}  P={p:+.6e}  psi={w}");
            }
        }
    }

    // replicate the scan: report every raw sign-change bracket of psi_53
    let n = 53usize;
    let (ga, gb) = sys.gap(0);
    let samples = 1 << 12;
    let pad = 1e-9 * (gb - ga);
    let (a, b) = (ga + pad, gb - pad);
    let mut prev: Option<(f64, f64)> = None;
    let mut count = 0;
    for i in 0..=samples {
        let x = a + (b - a) * i as f64 / samples as f64;
        let fx = match weyl_values(&rt, n, x) {
            Ok(v) => v[n],
            Err(_) => {
                prev = None;
                continue;
            }
        };
        if let Some((px, pf)) = prev {
            if pf * fx < 0.0 {
                count += 1;
                if count < 20 {
                    println!("bracket: [{px:+.9e}, {x:+.9e}]  f: {pf:+.3e} -> {fx:+.3e}");
                }
            }
        }
        prev = Some((x, fx));
    }
    println!("total psi_53 sign brackets in gap: {count}");
    Ok(())
}
