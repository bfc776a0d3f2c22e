use nalgebra::Vector3;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::assembly::{assemble_energy, quadrature_gradients};
use super::field::{interpolate_gradient, DeformationField};
use super::mesh::QP_PER_CELL;
use crate::error::{Error, Result};
use crate::models::{gradient_to_c, EnergyModel};
use crate::tensor::{inner, rng_for};

/// Largest nodal displacement, relative to the smallest cell edge.
pub const PERTURBATION_SCALE: f64 = 1e-2;
const MAX_RESCALES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub perturbations: usize,
    pub seed: u64,
    pub base_energy: f64,
    /// `min (Δ − B)` over the perturbations.
    pub min_gap: f64,
    /// `min B`.
    pub min_bound: f64,
    /// Largest `Δ − B` violation allowed: `1e-10·(1 + |I(φ₀)|)`.
    pub gap_tolerance: f64,
    pub bound_tolerance: f64,
    pub rescaled: usize,
    pub passed: bool,
}

/// `Δ = I(φ₀ + u) − I(φ₀)` and `B = ½ ∫ ⟨S₂(C₀), ∇uᵀ∇u⟩ dx` for nodal `u`.
pub fn energy_gap_for(
    field: &DeformationField,
    model: &dyn EnergyModel,
    u: &[Vector3<f64>],
) -> Result<(f64, f64)> {
    let base = assemble_energy(field, model)?;
    let moved = assemble_energy(&field.perturbed(u, 1.0), model)?;
    Ok((moved - base, bound(field, model, u)?))
}

fn bound(field: &DeformationField, model: &dyn EnergyModel, u: &[Vector3<f64>]) -> Result<f64> {
    let ufield = DeformationField {
        mesh: field.mesh.clone(),
        values: u.to_vec(),
    };
    let grads = quadrature_gradients(field);
    let mut b = 0.0;
    for (k, f) in grads.iter().enumerate() {
        let s2 = model.s2(&gradient_to_c(f)?)?;
        let gu = interpolate_gradient(&ufield, k / QP_PER_CELL, k % QP_PER_CELL);
        b += inner(s2.as_matrix(), &(gu.transpose() * gu));
    }
    Ok(0.5 * b * field.mesh.qp_weight())
}

/// Random nodal displacement, zero on Γ, with largest nodal norm `amplitude`.
pub fn random_perturbation(
    field: &DeformationField,
    seed: u64,
    index: u64,
    amplitude: f64,
) -> Vec<Vector3<f64>> {
    let mesh = &field.mesh;
    let mut rng = rng_for(seed, index);
    let mut u: Vec<Vector3<f64>> = (0..mesh.node_count())
        .map(|n| {
            let v = Vector3::from_fn(|_, _| StandardNormal.sample(&mut rng));
            if mesh.is_dirichlet(n) {
                Vector3::zeros()
            } else {
                v
            }
        })
        .collect();
    let max = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max > 0.0 {
        for v in &mut u {
            *v *= amplitude / max;
        }
    }
    u
}

/// Checks `I(φ₀ + u) − I(φ₀) ≥ B ≥ 0` over random admissible perturbations.
pub fn energy_gap_test(
    field: &DeformationField,
    model: &dyn EnergyModel,
    count: usize,
    seed: u64,
) -> Result<GapReport> {
    if field.mesh.free_nodes().next().is_none() {
        return Err(Error::InvalidParameter("no free nodes to perturb".into()));
    }
    let base = assemble_energy(field, model)?;
    let amplitude = PERTURBATION_SCALE * field.mesh.spacing().min();
    let mut min_gap = f64::INFINITY;
    let mut min_bound = f64::INFINITY;
    let mut rescaled = 0;
    for k in 0..count as u64 {
        let mut u = random_perturbation(field, seed, k, amplitude);
        let mut tries = 0;
        let (delta, b) = loop {
            match energy_gap_for(field, model, &u) {
                Ok(r) => break r,
                Err(Error::InadmissibleField { .. } | Error::SingularGradient { .. })
                    if tries < MAX_RESCALES =>
                {
                    tries += 1;
                    rescaled += 1;
                    u.iter_mut().for_each(|v| *v *= 0.5);
                }
                Err(e) => return Err(e),
            }
        };
        min_gap = min_gap.min(delta - b);
        min_bound = min_bound.min(b);
    }
    let gap_tolerance = 1e-10 * (1.0 + base.abs());
    let bound_tolerance = 1e-12 * (1.0 + base.abs());
    Ok(GapReport {
        perturbations: count,
        seed,
        base_energy: base,
        min_gap,
        min_bound,
        gap_tolerance,
        bound_tolerance,
        rescaled,
        passed: count > 0 && min_gap >= -gap_tolerance && min_bound >= -bound_tolerance,
    })
}
