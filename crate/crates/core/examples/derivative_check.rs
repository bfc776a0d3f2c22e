//! Analytic stresses and C-Hessians against central differences.

use cgconvex::models::{
    verify_derivatives, DetFunctionModel, EnergyModel, NegLogDet, NeoHookeMember, Prop2Quadratic,
    SaintVenantKirchhoff, TraceModel, ValanisLandelModel,
};
use cgconvex::scalar::ScalarC2Function;
use cgconvex::tensor::{spectral, PsymSampler};

fn main() -> cgconvex::Result<()> {
    let models: Vec<Box<dyn EnergyModel>> = vec![
        Box::new(NegLogDet::new()),
        Box::new(Prop2Quadratic::from_alpha(1.0 / 12.0)?),
        Box::new(TraceModel::new(0.5, 0.25)?),
        Box::new(NeoHookeMember::from_alpha(1.3, 0.1)?),
        Box::new(SaintVenantKirchhoff::new(1.0, 1.0)),
        Box::new(DetFunctionModel::new(ScalarC2Function::power(1.0, -2.0))),
        Box::new(ValanisLandelModel::new(
            ScalarC2Function::power(1.0, 0.5),
            None,
        )),
    ];
    let sampler = PsymSampler::new(42, 1.0);
    println!(
        "{:<16} {:>12} {:>12} {:>9}",
        "model", "S2 err", "Hess err", "analytic"
    );
    for m in &models {
        let (mut g, mut h, mut analytic) = (0.0f64, 0.0f64, true);
        for i in 0..100 {
            let c = sampler.sample(i);
            let step = 1e-4 * spectral(&c)?.eigenvalues[0].min(1.0);
            let r = verify_derivatives(m.as_ref(), &c, step)?;
            g = g.max(r.gradient_error);
            h = h.max(r.hessian_error);
            analytic &= r.hessian_analytic;
        }
        println!("{:<16} {g:>12.2e} {h:>12.2e} {analytic:>9}", m.name());
    }
    Ok(())
}
