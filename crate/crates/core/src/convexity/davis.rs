use super::{Basis, ConvexityReport, Property, ScalarCondition, Witness};
use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;

const SLACK: f64 = 1e-12;

/// Convexity of the spectral scalar `w̃`, which for `Σ w̃(μᵢ(C))` is
/// equivalent to convexity of the energy in C.
pub fn davis_check(w: &ScalarC2Function, grid: &[f64]) -> Result<ConvexityReport> {
    if grid.is_empty() || grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidParameter(
            "grid must be nonempty and strictly positive".into(),
        ));
    }
    let mut min = f64::INFINITY;
    let mut witness = None;
    for &t in grid {
        let v = w.d2(t);
        min = min.min(v);
        if witness.is_none() && v < -SLACK {
            witness = Some(Witness::Scalar {
                s: t,
                condition: ScalarCondition::SecondDerivative,
                value: v,
            });
        }
    }
    let mut report = ConvexityReport::sampled(
        Property::Davis,
        Basis::SampledGrid,
        witness,
        min,
        grid.len(),
        SLACK,
        None,
    );
    report.notes.push(format!("w̃ = {}", w.name()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::{
        hessian_psd_scan, Verdict, DEFAULT_GRID_MAX, DEFAULT_GRID_MIN, DEFAULT_GRID_POINTS,
    };
    use crate::models::ValanisLandelModel;
    use crate::scalar::log_grid;

    #[test]
    fn verdicts_and_hessian_cross_check() {
        let grid = log_grid(DEFAULT_GRID_MIN, DEFAULT_GRID_MAX, DEFAULT_GRID_POINTS);
        for (p, convex) in [(2.0, true), (1.0, true), (0.5, false), (3.0, true)] {
            let w = ScalarC2Function::power(1.0, p);
            let r = davis_check(&w, &grid).unwrap();
            assert_eq!(r.is_convex(), convex, "p = {p}");
            let scan = hessian_psd_scan(&ValanisLandelModel::new(w, None), 300, 3, 1e-10).unwrap();
            assert_eq!(scan.verdict, r.verdict, "p = {p}");
        }
    }

    #[test]
    fn square_root_witness_is_negative() {
        let r = davis_check(&ScalarC2Function::power(1.0, 0.5), &[1.0]).unwrap();
        assert_eq!(r.verdict, Verdict::NotConvex);
        assert_eq!(r.witness.unwrap().value(), -0.25);
    }
}
