//! Relaxation `QW(F) = inf_{S ⪰ 0} Ŵ(FᵀF + S)` along uniaxial stretch.
//! Pass an output path to also write the sweep as CSV.

use cgconvex::convexity::hessian_psd_scan;
use cgconvex::hull::{hull_sweep, uniaxial_path, write_sweep_csv, HullOptions};
use cgconvex::models::SaintVenantKirchhoff;

fn main() -> cgconvex::Result<()> {
    let model = SaintVenantKirchhoff::new(1.0, 0.0);
    let evidence = hessian_psd_scan(&model, 1000, 2, 1e-8)?;
    let rows = hull_sweep(
        &model,
        &uniaxial_path(0.1, 1.5, 15),
        &evidence,
        &HullOptions::default(),
    )?;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>5}",
        "t", "W", "QW", "gap", "conv"
    );
    for r in &rows {
        println!(
            "{:>6.2} {:>12.6} {:>12.3e} {:>12.6} {:>5}",
            r.t, r.w, r.qw, r.gap, r.converged
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        write_sweep_csv(&rows, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
