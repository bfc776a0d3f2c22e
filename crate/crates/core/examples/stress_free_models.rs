//! Stress-free reference states and the linearized response of the
//! Neo-Hooke family.

use cgconvex::models::{EnergyModel, NeoHookeMember, Prop2Quadratic, TraceModel};
use cgconvex::tensor::SymMat3;

fn main() -> cgconvex::Result<()> {
    let i = SymMat3::identity();
    let models: Vec<Box<dyn EnergyModel>> = vec![
        Box::new(Prop2Quadratic::from_alpha(1.0 / 12.0)?),
        Box::new(TraceModel::new(0.5, 0.25)?),
        Box::new(NeoHookeMember::from_alpha(1.0, 0.25)?),
    ];
    for m in &models {
        println!(
            "{:<16} |S2(I)| = {:.3e}  params {:?}",
            m.name(),
            m.s2(&i)?.norm(),
            m.parameters()
        );
    }

    // Off the constraint the reference carries stress.
    let off = Prop2Quadratic::unconstrained(0.1, 0.3);
    println!("prop2 off-constraint |S2(I)| = {:.3e}", off.s2(&i)?.norm());

    println!(
        "\n{:>10} {:>12} {:>14} {:>10}",
        "alpha", "mu", "bulk coeff", "nu"
    );
    for alpha in [1e-3, 0.1, 0.25, 1.0, 100.0, 1e3] {
        let r = NeoHookeMember::from_alpha(1.0, alpha)?.linearized_response();
        println!(
            "{alpha:>10} {:>12.6} {:>14.6} {:>10.6}",
            r.shear_modulus, r.bulk_coefficient, r.poisson
        );
    }
    Ok(())
}
