//! Scalar test for energies `f(det C)` against a sampled Hessian scan.

use cgconvex::convexity::{
    det_conditions, det_convexity_check, hessian_psd_scan, DEFAULT_GRID_MAX, DEFAULT_GRID_MIN,
    DEFAULT_GRID_POINTS,
};
use cgconvex::models::DetFunctionModel;
use cgconvex::scalar::{log_grid, ScalarC2Function};

fn main() -> cgconvex::Result<()> {
    let grid = log_grid(DEFAULT_GRID_MIN, DEFAULT_GRID_MAX, DEFAULT_GRID_POINTS);
    let family = [
        ScalarC2Function::neg_log(1.0),
        ScalarC2Function::power(1.0, -1.0),
        ScalarC2Function::power(1.0, -2.0),
        ScalarC2Function::power(1.0, 0.5),
        ScalarC2Function::power(1.0, 1.0),
        ScalarC2Function::power(1.0, 2.0),
    ];
    println!(
        "{:<10} {:>14} {:>14} {:>12} {:>12}",
        "f", "slope@2", "curv@2", "scalar", "scan"
    );
    for f in family {
        let (slope, curvature) = det_conditions(&f, 3, 2.0);
        let scalar = det_convexity_check(&f, 3, &grid)?;
        let scan = hessian_psd_scan(&DetFunctionModel::new(f.clone()), 1000, 1, 1e-8)?;
        println!(
            "{:<10} {:>14.6e} {:>14.6e} {:>12?} {:>12?}",
            f.name(),
            slope,
            curvature,
            scalar.verdict,
            scan.verdict
        );
        if let Some(w) = &scalar.witness {
            println!("           witness: {}", serde_json::to_string(w).unwrap());
        }
    }
    Ok(())
}
