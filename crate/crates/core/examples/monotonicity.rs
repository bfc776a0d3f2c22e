//! Convexity in C through monotonicity of the second Piola-Kirchhoff stress.

use cgconvex::convexity::{hessian_psd_scan, s2_monotonicity_pair, s2_monotonicity_scan};
use cgconvex::models::{EnergyModel, NegLogDet, SaintVenantKirchhoff};
use cgconvex::tensor::SymMat3;

fn main() -> cgconvex::Result<()> {
    let models: Vec<Box<dyn EnergyModel>> = vec![
        Box::new(NegLogDet::new()),
        Box::new(SaintVenantKirchhoff::new(1.0, 1.0)),
        Box::new(SaintVenantKirchhoff::new(1.0, -1.0)),
    ];
    for m in &models {
        let mono = s2_monotonicity_scan(m.as_ref(), 1000, 9)?;
        let hess = hessian_psd_scan(m.as_ref(), 1000, 9, 1e-8)?;
        println!(
            "{:<14} {:?}: monotonicity {:?} (min cosine {:.3e}), Hessian {:?}",
            m.name(),
            m.parameters(),
            mono.verdict,
            mono.min_value,
            hess.verdict
        );
    }
    let svk = SaintVenantKirchhoff::new(1.0, 1.0);
    let c1 = SymMat3::identity();
    let c2 = SymMat3::identity() * 2.0;
    println!(
        "SVK(1, 1): <S2(2I) - S2(I), 2I - I> = {}",
        s2_monotonicity_pair(&svk, &c1, &c2)?
    );
    Ok(())
}
