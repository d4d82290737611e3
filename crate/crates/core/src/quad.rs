//! Gauss-Legendre rules, built from scratch by Newton iteration on the
//! Legendre polynomials, plus the cosine-substitution node layouts used
//! for integrals with inverse-square-root edge singularities.

/// Gauss-Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre P_n(x) and its derivative by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from (1 - x^2) P_n' = n (P_{n-1} - x P_n).
    let d = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, d)
}

impl GlRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi-style initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..64 {
                let (p, d) = legendre_pair(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_pair(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GlRule { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Nodes for the substitution `x = a + (b-a) sin^2(theta/2)` on a segment
/// `[a, b]`, with theta running over (0, pi). `dl = x - a` and `dr = b - x`
/// are carried in cancellation-free form; `w` is the Gauss weight for the
/// theta variable (so `sum w_i f(x_i)` approximates the theta integral).
#[derive(Clone, Debug)]
pub struct SegmentNodes {
    pub x: Vec<f64>,
    pub dl: Vec<f64>,
    pub dr: Vec<f64>,
    pub w: Vec<f64>,
}

/// Cosine-substituted nodes over the full segment: theta in (0, pi).
pub fn cosine_segment(a: f64, b: f64, rule: &GlRule) -> SegmentNodes {
    cosine_segment_partial(a, b, std::f64::consts::PI, rule)
}

/// Cosine-substituted nodes with theta in (0, theta_max), theta_max <= pi.
/// Integrals `int_a^{x(theta_max)}` become plain theta integrals.
pub fn cosine_segment_partial(a: f64, b: f64, theta_max: f64, rule: &GlRule) -> SegmentNodes {
    let width = b - a;
    let n = rule.nodes.len();
    let mut out = SegmentNodes {
        x: Vec::with_capacity(n),
        dl: Vec::with_capacity(n),
        dr: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
    };
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let theta = 0.5 * theta_max * (t + 1.0);
        let sh = (0.5 * theta).sin();
        let ch = (0.5 * theta).cos();
        let dl = width * sh * sh;
        let dr = width * ch * ch;
        out.x.push(a + dl);
        out.dl.push(dl);
        out.dr.push(dr);
        out.w.push(w * 0.5 * theta_max);
    }
    out
}

/// Angle theta in [0, pi] with `x = a + (b-a) sin^2(theta/2)`, evaluated
/// stably from whichever end of the segment x is closer to.
pub fn segment_angle(a: f64, b: f64, x: f64) -> f64 {
    let width = b - a;
    let ratio = ((x - a) / width).clamp(0.0, 1.0);
    if ratio <= 0.5 {
        2.0 * ratio.sqrt().asin()
    } else {
        std::f64::consts::PI - 2.0 * (1.0 - ratio).sqrt().asin()
    }
}
