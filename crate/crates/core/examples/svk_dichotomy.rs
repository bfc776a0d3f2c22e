//! Saint Venant-Kirchhoff: convex in C for λ ≥ 0, yet not rank-one convex.

use nalgebra::Vector3;

use cgconvex::convexity::{
    hessian_psd_scan, legendre_hadamard_scan, rank_one_form, sample_gradients,
};
use cgconvex::models::SaintVenantKirchhoff;
use cgconvex::tensor::Mat3;

fn main() -> cgconvex::Result<()> {
    for lambda in [1.0, 0.0, -1.0] {
        let m = SaintVenantKirchhoff::new(1.0, lambda);
        let c_scan = hessian_psd_scan(&m, 1000, 3, 1e-8)?;
        let lh = legendre_hadamard_scan(&m, &sample_gradients(3, 50, 0.1, 2.0), 12, 1e-8)?;
        println!(
            "lambda = {lambda:>4}: convex in C {:?} ({}), rank-one {:?} (min {:.4})",
            c_scan.verdict, c_scan.label, lh.verdict, lh.min_value
        );
    }

    // Uniaxial compression along e1.
    let m = SaintVenantKirchhoff::new(1.0, 0.0);
    let e1 = Vector3::x();
    println!("\n{:>6} {:>12}", "F11", "D2W[e1e1]");
    for s in [0.1, 0.3, 0.5, 0.577, 0.7, 1.0, 1.5] {
        let f = Mat3::from_diagonal(&Vector3::new(s, 1.0, 1.0));
        println!("{s:>6} {:>12.6}", rank_one_form(&m, &f, &e1, &e1)?);
    }
    Ok(())
}
