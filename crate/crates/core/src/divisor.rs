//! Divisors supported on the gap closures: one point per gap, each carrying
//! a sheet sign. The sign is +-1 for interior points and exactly 0 at gap
//! endpoints, where the two sheets meet.

use crate::error::{invalid, Result};
use crate::geometry::IntervalSystem;

/// Fraction of the gap width inside which a point is snapped to the edge.
const EDGE_SNAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GapDivisor {
    points: Vec<(f64, i8)>,
}

impl GapDivisor {
    /// Validates and normalizes: `points[j]` must lie in the closure of gap
    /// j with `delta in {-1, 0, 1}`; points within a sliver of an edge are
    /// snapped onto it and must carry `delta = 0`, interior points must not.
    pub fn new(sys: &IntervalSystem, points: Vec<(f64, i8)>) -> Result<Self> {
        if points.len() != sys.gaps() {
            return Err(invalid(format!(
                "divisor needs one point per gap ({}), got {}",
                sys.gaps(),
                points.len()
            )));
        }
        let mut out = Vec::with_capacity(points.len());
        for (j, (y, delta)) in points.into_iter().enumerate() {
            if !(-1..=1).contains(&delta) {
                return Err(invalid(format!("sheet sign must be -1, 0 or 1, got {delta}")));
            }
            let (ga, gb) = sys.gap(j);
            let snap = EDGE_SNAP * (gb - ga);
            if !(ga - snap..=gb + snap).contains(&y) {
                return Err(invalid(format!(
                    "point {y} outside the closure of gap {j} = [{ga}, {gb}]"
                )));
            }
            let y = if (y - ga).abs() <= snap {
                ga
            } else if (y - gb).abs() <= snap {
                gb
            } else {
                y
            };
            let at_edge = y == ga || y == gb;
            if at_edge && delta != 0 {
                return Err(invalid(format!(
                    "gap {j}: edge point {y} must carry sheet sign 0"
                )));
            }
            if !at_edge && delta == 0 {
                return Err(invalid(format!(
                    "gap {j}: interior point {y} needs a sheet sign of -1 or 1"
                )));
            }
            out.push((y, delta));
        }
        Ok(GapDivisor { points: out })
    }

    pub fn points(&self) -> &[(f64, i8)] {
        &self.points
    }

    pub fn y(&self, j: usize) -> f64 {
        self.points[j].0
    }

    pub fn delta(&self, j: usize) -> i8 {
        self.points[j].1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when every point sits strictly inside its gap.
    pub fn is_interior(&self) -> bool {
        self.points.iter().all(|(_, d)| *d != 0)
    }
}
