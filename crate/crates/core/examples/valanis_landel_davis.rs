//! Spectral energies `Σ w̃(λᵢ(C))`: the Davis criterion versus a sampled scan.

use cgconvex::convexity::{davis_check, hessian_psd_scan};
use cgconvex::models::ValanisLandelModel;
use cgconvex::scalar::{log_grid, ScalarC2Function};

fn main() -> cgconvex::Result<()> {
    let grid = log_grid(1e-3, 1e3, 400);
    let cases = [
        ("t^2", ScalarC2Function::power(1.0, 2.0)),
        ("t^1.5", ScalarC2Function::power(1.0, 1.5)),
        ("sqrt t", ScalarC2Function::power(1.0, 0.5)),
        ("-log t", ScalarC2Function::neg_log(1.0)),
    ];
    for (label, w) in cases {
        let davis = davis_check(&w, &grid)?;
        let scan = hessian_psd_scan(&ValanisLandelModel::new(w, None), 1000, 5, 1e-8)?;
        println!(
            "{label:<12} Davis {:?}, scan {:?} ({})",
            davis.verdict, scan.verdict, scan.label
        );
    }
    Ok(())
}
