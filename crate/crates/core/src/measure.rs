//! Measures on a band system: a JSON-facing description, discretization
//! into weighted nodes built on the cancellation-free band quadrature, the
//! isospectral family attached to a gap divisor, and the Szego integral of
//! the absolutely continuous density.

use crate::divisor::GapDivisor;
use crate::equilibrium::{equilibrium, EquilibriumData};
use crate::error::{consistency, invalid, Result};
use crate::geometry::{IntervalSystem, Region};
use crate::quad::{cosine_segment, GlRule};
use serde::{Deserialize, Serialize};

/// Declarative measure description; the JSON schema the CLI consumes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub endpoints: Vec<f64>,
    pub weight: WeightKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub point_masses: Vec<PointMass>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightKind {
    /// The equilibrium measure of the bands.
    Equilibrium,
    /// `q(x) d(equilibrium)` for a polynomial `q` positive on the bands;
    /// ascending coefficients.
    PolyTimesEquilibrium { coeffs: Vec<f64> },
    /// The measure in the isospectral family indexed by a gap divisor;
    /// carries its own point masses at divisor points on the +1 sheet.
    Isospectral { divisor: Vec<DivisorPoint> },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorPoint {
    pub y: f64,
    pub delta: i8,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMass {
    pub position: f64,
    pub mass: f64,
}

/// Nodes and weights of a discretized measure. Band nodes come first,
/// then any point masses (whose nodes are the mass positions).
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl MeasureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MeasureSpec =
            serde_json::from_str(text).map_err(|e| invalid(format!("measure spec: {e}")))?;
        spec.validated()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure spec serializes")
    }

    /// Full validation; returns the parsed system.
    pub fn validated(&self) -> Result<IntervalSystem> {
        let sys = IntervalSystem::new(self.endpoints.clone())?;
        match &self.weight {
            WeightKind::Equilibrium => {}
            WeightKind::PolyTimesEquilibrium { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().all(|c| *c == 0.0) {
                    return Err(invalid("polynomial weight must be nonzero"));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("polynomial weight has non-finite coefficients"));
                }
                let q = crate::poly::Poly::new(coeffs.clone());
                for k in 0..sys.bands() {
                    let (a, b) = sys.band(k);
                    for i in 0..=400 {
                        let x = a + (b - a) * i as f64 / 400.0;
                        if q.eval(x) <= 0.0 {
                            return Err(invalid(format!(
                                "polynomial weight is not positive on the bands (q({x}) <= 0)"
                            )));
                        }
                    }
                }
            }
            WeightKind::Isospectral { divisor } => {
                let pts: Vec<(f64, i8)> = divisor.iter().map(|p| (p.y, p.delta)).collect();
                GapDivisor::new(&sys, pts)?;
            }
        }
        for pm in &self.point_masses {
            if !(pm.mass > 0.0) || !pm.mass.is_finite() {
                return Err(invalid(format!("point mass must be positive, got {}", pm.mass)));
            }
            if !pm.position.is_finite() {
                return Err(invalid("point mass position must be finite"));
            }
            match sys.locate(pm.position) {
                Region::Band(_) | Region::Endpoint(_) => {
                    return Err(invalid(format!(
                        "point mass at {} sits on the bands",
                        pm.position
                    )));
                }
                _ => {}
            }
        }
        Ok(sys)
    }

    pub fn equilibrium_of(sys: &IntervalSystem) -> MeasureSpec {
        MeasureSpec {
            endpoints: sys.endpoints().to_vec(),
            weight: WeightKind::Equilibrium,
            point_masses: Vec::new(),
        }
    }

    pub fn isospectral_of(sys: &IntervalSystem, div: &GapDivisor) -> MeasureSpec {
        MeasureSpec {
            endpoints: sys.endpoints().to_vec(),
            weight: WeightKind::Isospectral {
                divisor: div
                    .points()
                    .iter()
                    .map(|&(y, delta)| DivisorPoint { y, delta })
                    .collect(),
            },
            point_masses: Vec::new(),
        }
    }
}

/// Atom of the isospectral measure at a divisor point: positive exactly on
/// the +1 sheet, `-(1 + delta_j) s(y_j) / (2 G'(y_j))` with `G` the monic
/// polynomial through the divisor points and `s` the signed branch.
pub fn isospectral_atom(sys: &IntervalSystem, div: &GapDivisor, j: usize) -> f64 {
    let delta = div.delta(j);
    if delta != 1 {
        return 0.0;
    }
    let y = div.y(j);
    let s = sys.branch_value(y);
    let mut gp = 1.0;
    for (i, &(yi, _)) in div.points().iter().enumerate() {
        if i != j {
            gp *= y - yi;
        }
    }
    -s / gp
}

/// Discretizes the measure with a fixed Gauss rule per band.
pub fn discretize(spec: &MeasureSpec, nodes_per_band: usize) -> Result<DiscreteMeasure> {
    let sys = spec.validated()?;
    let eq = match &spec.weight {
        WeightKind::Isospectral { .. } => None,
        _ => Some(equilibrium(&sys, nodes_per_band.max(64))?),
    };
    discretize_with(spec, &sys, eq.as_ref(), nodes_per_band)
}

/// As `discretize`, reusing an equilibrium computation when available.
pub fn discretize_with(
    spec: &MeasureSpec,
    sys: &IntervalSystem,
    eq: Option<&EquilibriumData>,
    nodes_per_band: usize,
) -> Result<DiscreteMeasure> {
    if nodes_per_band < 8 {
        return Err(invalid("need at least 8 quadrature nodes per band"));
    }
    let rule = GlRule::new(nodes_per_band);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();

    match &spec.weight {
        WeightKind::Equilibrium | WeightKind::PolyTimesEquilibrium { .. } => {
            let owned;
            let eqd = match eq {
                Some(e) => e,
                None => {
                    owned = equilibrium(sys, nodes_per_band.max(64))?;
                    &owned
                }
            };
            let q = match &spec.weight {
                WeightKind::PolyTimesEquilibrium { coeffs } => {
                    Some(crate::poly::Poly::new(coeffs.clone()))
                }
                _ => None,
            };
            for k in 0..sys.bands() {
                let (a, b) = sys.band(k);
                let seg = cosine_segment(a, b, &rule);
                let sign = sys.band_sign(k);
                for i in 0..seg.x.len() {
                    let x = seg.x[i];
                    let rest = sys.rest_product_abs(x, 2 * k, 2 * k + 1);
                    let mut w =
                        seg.w[i] * sign * eqd.r_inf.eval(x) / (std::f64::consts::PI * rest.sqrt());
                    if let Some(q) = &q {
                        w *= q.eval(x);
                    }
                    if !(w > 0.0) {
                        return Err(consistency(format!(
                            "nonpositive density weight at node {x}"
                        )));
                    }
                    nodes.push(x);
                    weights.push(w);
                }
            }
        }
        WeightKind::Isospectral { divisor } => {
            let pts: Vec<(f64, i8)> = divisor.iter().map(|p| (p.y, p.delta)).collect();
            let div = GapDivisor::new(sys, pts)?;
            for k in 0..sys.bands() {
                let (a, b) = sys.band(k);
                let seg = cosine_segment(a, b, &rule);
                let sign = sys.band_sign(k);
                for i in 0..seg.x.len() {
                    let x = seg.x[i];
                    let rest = sys.rest_product_abs(x, 2 * k, 2 * k + 1);
                    let mut denom = 1.0;
                    for &(y, _) in div.points() {
                        denom *= x - y;
                    }
                    let w = seg.w[i] * sign * seg.dl[i] * seg.dr[i] * rest.sqrt()
                        / (2.0 * std::f64::consts::PI * denom);
                    if !(w > 0.0) {
                        return Err(consistency(format!(
                            "isospectral density not positive at node {x}"
                        )));
                    }
                    nodes.push(x);
                    weights.push(w);
                }
            }
            for j in 0..div.len() {
                let m = isospectral_atom(sys, &div, j);
                if m < 0.0 {
                    return Err(consistency(format!("negative atom at divisor point {j}")));
                }
                if m > 0.0 {
                    nodes.push(div.y(j));
                    weights.push(m);
                }
            }
        }
    }

    for pm in &spec.point_masses {
        nodes.push(pm.position);
        weights.push(pm.mass);
    }
    Ok(DiscreteMeasure { nodes, weights })
}

/// Convenience: the isospectral measure of a divisor, discretized.
pub fn isospectral_measure(
    sys: &IntervalSystem,
    div: &GapDivisor,
    nodes_per_band: usize,
) -> Result<DiscreteMeasure> {
    discretize_with(
        &MeasureSpec::isospectral_of(sys, div),
        sys,
        None,
        nodes_per_band,
    )
}

/// Szego integral `int_E log(w) d(equilibrium)` of the a.c. density `w`.
/// Point masses do not contribute. The integrand's edge behavior is
/// log-integrable; the cosine substitution handles it without special
/// casing.
pub fn szego_integral(spec: &MeasureSpec, nodes_per_band: usize) -> Result<f64> {
    let sys = spec.validated()?;
    let eq = equilibrium(&sys, nodes_per_band.max(64))?;
    let rule = GlRule::new(24);
    let q = match &spec.weight {
        WeightKind::PolyTimesEquilibrium { coeffs } => {
            Some(crate::poly::Poly::new(coeffs.clone()))
        }
        _ => None,
    };
    let div = match &spec.weight {
        WeightKind::Isospectral { divisor } => {
            let pts: Vec<(f64, i8)> = divisor.iter().map(|p| (p.y, p.delta)).collect();
            Some(GapDivisor::new(&sys, pts)?)
        }
        _ => None,
    };
    // The integrand behaves like log(sin t) at the band edges in the angle
    // variable, so plain Gauss nodes converge slowly. A mesh graded
    // geometrically into both corners restores fast convergence.
    let panels = graded_theta_panels(44);
    let mut acc = 0.0;
    for k in 0..sys.bands() {
        let (a, b) = sys.band(k);
        let width = b - a;
        let sign = sys.band_sign(k);
        for &(t0, t1) in &panels {
            let mid = 0.5 * (t0 + t1);
            let half = 0.5 * (t1 - t0);
            for (gx, gw) in rule.nodes.iter().zip(&rule.weights) {
                let theta = mid + half * gx;
                let s = (0.5 * theta).sin();
                let c = (0.5 * theta).cos();
                let dl = width * s * s;
                let dr = width * c * c;
                let x = a + dl;
                let rest = sys.rest_product_abs(x, 2 * k, 2 * k + 1);
                let habs = (dl * dr * rest).sqrt();
                // Density of the measure being probed.
                let density = match (&q, &div) {
                    (Some(q), _) => {
                        q.eval(x) * sign * eq.r_inf.eval(x) / (std::f64::consts::PI * habs)
                    }
                    (_, Some(d)) => {
                        let mut denom = 1.0;
                        for &(y, _) in d.points() {
                            // Divisor points snapped onto this band's edges
                            // need the cancellation-free distances.
                            denom *= if y == a {
                                dl
                            } else if y == b {
                                -dr
                            } else {
                                x - y
                            };
                        }
                        sign * habs / (2.0 * std::f64::consts::PI * denom)
                    }
                    _ => sign * eq.r_inf.eval(x) / (std::f64::consts::PI * habs),
                };
                if !(density > 0.0) {
                    return Err(consistency(format!("density not positive at {x}")));
                }
                // Equilibrium weight for the outer integral.
                let w_eq =
                    sign * eq.r_inf.eval(x) / (std::f64::consts::PI * rest.sqrt()) * half * gw;
                acc += w_eq * density.ln();
            }
        }
    }
    Ok(acc)
}

/// Panels covering `[0, pi]`, geometrically refined toward both endpoints.
fn graded_theta_panels(levels: usize) -> Vec<(f64, f64)> {
    let quarter = 0.5 * std::f64::consts::PI;
    let mut cuts = vec![0.0];
    for k in (0..=levels).rev() {
        cuts.push(quarter * 0.5f64.powi(k as i32));
    }
    let mut panels: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mirrored: Vec<(f64, f64)> = panels
        .iter()
        .rev()
        .map(|&(t0, t1)| (std::f64::consts::PI - t1, std::f64::consts::PI - t0))
        .collect();
    panels.extend(mirrored);
    panels
}
