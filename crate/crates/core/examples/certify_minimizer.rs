//! Solve a homogeneous Dirichlet problem and certify global minimality.
//! Tension is certified; compression is refused.

use std::sync::Arc;

use nalgebra::Vector3;

use cgconvex::convexity::ConvexityReport;
use cgconvex::models::Prop2Quadratic;
use cgconvex::tensor::Mat3;
use cgconvex::variational::{
    certify_global, energy_gap_test, solve, stability_quadform_scan, CertifyOptions, DirichletData,
    HexMesh, SolverOptions,
};

fn main() -> cgconvex::Result<()> {
    let model = Prop2Quadratic::new(1.0 / 12.0, 0.25)?;
    let evidence = ConvexityReport::from_model_claim(&model).expect("closed-form claim");
    let mesh = Arc::new(HexMesh::unit_cube(4)?);

    let cases = [
        (
            "tension",
            Mat3::from_diagonal(&Vector3::new(1.2, 1.1, 1.05)),
        ),
        ("compression", Mat3::identity() * 0.5),
    ];
    for (name, f0) in cases {
        let out = solve(
            mesh.clone(),
            &model,
            &DirichletData::affine(f0),
            &SolverOptions::default(),
        )?;
        let cert = certify_global(&out.field, &model, &evidence, &CertifyOptions::default());
        println!(
            "{name}: {} Newton steps, residual {:.2e}, status {:?}, min eig S2 {:.6}",
            out.iterations, out.residual_norm, cert.status, cert.min_s2_eigenvalue
        );
        for g in &cert.failing_gates {
            println!("  gate {:?}: {}", g.gate, g.reason);
        }
        let gap = energy_gap_test(&out.field, &model, 100, 1)?;
        let stab = stability_quadform_scan(&out.field, &model, 50, 1)?;
        println!(
            "  energy gap: min(Δ − B) = {:.3e}, min B = {:.3e}, passed {}",
            gap.min_gap, gap.min_bound, gap.passed
        );
        println!(
            "  second variation quotient in [{:.4}, {:.4}]",
            stab.min_quotient, stab.max_quotient
        );
    }
    Ok(())
}
