use nalgebra::{SMatrix, Vector3};
use serde::Serialize;

use super::assembly::{check_admissible, quadrature_gradients};
use super::field::{interpolate_gradient, DeformationField};
use super::gap::random_perturbation;
use super::mesh::QP_PER_CELL;
use crate::error::{Error, Result};
use crate::models::{EnergyModel, GradientTangent, Matrix9};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub test_fields: usize,
    pub seed: u64,
    /// `min ∫ D²_F W(∇φ₀)[∇ϑ, ∇ϑ] dx / ‖∇ϑ‖²`.
    pub min_quotient: f64,
    pub max_quotient: f64,
}

/// Second variation of `I` at a fixed state, tabulated per quadrature point.
pub struct SecondVariation<'a> {
    field: &'a DeformationField,
    tangents: Vec<Matrix9>,
}

impl<'a> SecondVariation<'a> {
    pub fn new(field: &'a DeformationField, model: &dyn EnergyModel) -> Result<Self> {
        let grads = quadrature_gradients(field);
        check_admissible(&grads)?;
        let tangents = grads
            .iter()
            .map(|f| Ok(GradientTangent::new(model, f)?.matrix9()))
            .collect::<Result<_>>()?;
        Ok(SecondVariation { field, tangents })
    }

    /// `(∫ D²_F W[∇ϑ, ∇ϑ], ∫ |∇ϑ|²)`.
    pub fn evaluate(&self, theta: &[Vector3<f64>]) -> (f64, f64) {
        let t = DeformationField {
            mesh: self.field.mesh.clone(),
            values: theta.to_vec(),
        };
        let (mut num, mut den) = (0.0, 0.0);
        for (k, a) in self.tangents.iter().enumerate() {
            let g = interpolate_gradient(&t, k / QP_PER_CELL, k % QP_PER_CELL);
            let v = SMatrix::<f64, 9, 1>::from_fn(|i, _| g[(i / 3, i % 3)]);
            num += (v.transpose() * a * v)[(0, 0)];
            den += g.norm_squared();
        }
        let w = self.field.mesh.qp_weight();
        (num * w, den * w)
    }
}

/// Rayleigh quotients of the second variation over random test fields that
/// vanish on Γ.
pub fn stability_quadform_scan(
    field: &DeformationField,
    model: &dyn EnergyModel,
    count: usize,
    seed: u64,
) -> Result<StabilityReport> {
    if field.mesh.free_nodes().next().is_none() {
        return Err(Error::InvalidParameter(
            "no free nodes for test fields".into(),
        ));
    }
    let sv = SecondVariation::new(field, model)?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for k in 0..count as u64 {
        let theta = random_perturbation(field, seed, k, 1.0);
        let (num, den) = sv.evaluate(&theta);
        let q = num / den;
        min = min.min(q);
        max = max.max(q);
    }
    Ok(StabilityReport {
        test_fields: count,
        seed,
        min_quotient: min,
        max_quotient: max,
    })
}
