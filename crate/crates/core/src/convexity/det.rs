use super::{Basis, ConvexityReport, Property, ScalarCondition, Witness};
use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;

pub const DEFAULT_GRID_MIN: f64 = 1e-3;
pub const DEFAULT_GRID_MAX: f64 = 1e3;
pub const DEFAULT_GRID_POINTS: usize = 61;

/// Relative slack on both conditions.
const SLACK: f64 = 1e-12;

/// `(f″(s) + (n−1)/(n s)·f′(s), −f′(s))`; both must be non-negative for
/// `C ↦ f(det C)` to be convex on positive-definite n×n matrices.
pub fn det_conditions(f: &ScalarC2Function, n: usize, s: f64) -> (f64, f64) {
    let d1 = f.d1(s);
    let d2 = f.d2(s);
    let k = (n as f64 - 1.0) / (n as f64 * s);
    (d2 + k * d1, -d1)
}

/// Checks both scalar conditions at every grid point. A grid-based positive
/// is reported as "no violation on sampled grid".
pub fn det_convexity_check(
    f: &ScalarC2Function,
    n: usize,
    grid: &[f64],
) -> Result<ConvexityReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension n must be at least 2 (got {n})"
        )));
    }
    if grid.is_empty() || grid.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidParameter(
            "grid must be nonempty and strictly positive".into(),
        ));
    }

    let mut witness: Option<Witness> = None;
    let mut min_value = f64::INFINITY;
    let mut non_finite = false;
    for &s in grid {
        let (curvature, slope) = det_conditions(f, n, s);
        if !curvature.is_finite() || !slope.is_finite() {
            non_finite = true;
            continue;
        }
        let d1 = f.d1(s).abs();
        let scale_curv = 1.0 + f.d2(s).abs() + (n as f64 - 1.0) / (n as f64 * s) * d1;
        let scale_slope = 1.0 + d1;
        min_value = min_value.min(curvature).min(slope);
        if witness.is_none() {
            if slope < -SLACK * scale_slope {
                witness = Some(Witness::Scalar {
                    s,
                    condition: ScalarCondition::Slope,
                    value: slope,
                });
            } else if curvature < -SLACK * scale_curv {
                witness = Some(Witness::Scalar {
                    s,
                    condition: ScalarCondition::Curvature,
                    value: curvature,
                });
            }
        }
    }

    let mut report = ConvexityReport::sampled(
        Property::DetConvexity,
        Basis::SampledGrid,
        witness,
        min_value,
        grid.len(),
        SLACK,
        None,
    );
    report.notes.push(format!("f = {}, n = {n}", f.name()));
    if non_finite && report.witness.is_none() {
        report.verdict = super::Verdict::Inconclusive;
        report.label = "non-finite derivative values on the grid".into();
    }
    Ok(report)
}
