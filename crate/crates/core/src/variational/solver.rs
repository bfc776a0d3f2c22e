use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix4, Vector3, Vector4};

use super::assembly::{
    assemble_energy, assemble_residual, assemble_tangent, min_det, residual_norm,
};
use super::field::DeformationField;
use super::mesh::HexMesh;
use crate::error::{Error, Result};
use crate::models::EnergyModel;
use crate::tensor::Mat3;

/// Steps are halved while any quadrature point has `det F` at or below this.
pub const MIN_STEP_DET: f64 = 1e-6;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Prescribed values on Γ.
#[derive(Clone, Debug, PartialEq)]
pub enum DirichletData {
    /// `φ₀(x) = F x + offset`.
    Affine { f: Mat3, offset: Vector3<f64> },
    /// Explicit values for every Dirichlet node.
    Table(Vec<(usize, Vector3<f64>)>),
}

impl DirichletData {
    pub fn affine(f: Mat3) -> Self {
        DirichletData::Affine {
            f,
            offset: Vector3::zeros(),
        }
    }

    /// Affine extension of the data to the whole mesh. Table data is fitted
    /// by least squares and then imposed exactly on Γ.
    pub fn initial_guess(&self, mesh: Arc<HexMesh>) -> Result<DeformationField> {
        match self {
            DirichletData::Affine { f, offset } => Ok(DeformationField::affine(mesh, f, offset)),
            DirichletData::Table(rows) => {
                let mut given = vec![None; mesh.node_count()];
                for &(n, v) in rows {
                    if n >= mesh.node_count() {
                        return Err(Error::InvalidParameter(format!(
                            "Dirichlet node {n} out of range"
                        )));
                    }
                    if !mesh.is_dirichlet(n) {
                        return Err(Error::InvalidParameter(format!(
                            "node {n} is not on the Dirichlet boundary"
                        )));
                    }
                    given[n] = Some(v);
                }
                if let Some(n) = mesh.dirichlet_nodes().find(|&n| given[n].is_none()) {
                    return Err(Error::InvalidParameter(format!(
                        "no Dirichlet value for boundary node {n}"
                    )));
                }
                let (f, b) = fit_affine(&mesh, rows);
                let mut field = DeformationField::affine(mesh, &f, &b);
                for (n, v) in given.into_iter().enumerate() {
                    if let Some(v) = v {
                        field.values[n] = v;
                    }
                }
                Ok(field)
            }
        }
    }
}

fn fit_affine(mesh: &HexMesh, rows: &[(usize, Vector3<f64>)]) -> (Mat3, Vector3<f64>) {
    let mut ata = Matrix4::zeros();
    let mut aty = nalgebra::Matrix4x3::zeros();
    for &(n, v) in rows {
        let x = mesh.node_coords(n);
        let p = Vector4::new(x[0], x[1], x[2], 1.0);
        ata += p * p.transpose();
        aty += p * v.transpose();
    }
    let sol = ata
        .svd(true, true)
        .solve(&aty, 1e-12 * ata.norm())
        .unwrap_or_else(|_| nalgebra::Matrix4x3::zeros());
    let f = sol.fixed_rows::<3>(0).transpose();
    let b = sol.row(3).transpose();
    (f, b)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SolverOptions {
    /// Relative residual target: stop at `‖r‖ ≤ tol·(1 + ‖r₀‖)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub field: DeformationField,
    pub iterations: usize,
    pub residual_norm: f64,
    pub initial_residual: f64,
    pub converged: bool,
    /// Energy after each accepted step, starting with the initial guess.
    pub energy_history: Vec<f64>,
    /// Iterations that fell back to a gradient step.
    pub gradient_steps: usize,
}

impl SolveOutcome {
    pub fn energy(&self) -> f64 {
        *self
            .energy_history
            .last()
            .expect("history starts with the initial energy")
    }
}

/// Newton's method on the discrete Euler-Lagrange equations with a
/// backtracking line search on `I(φ)`.
pub fn solve(
    mesh: Arc<HexMesh>,
    model: &dyn EnergyModel,
    dirichlet: &DirichletData,
    opts: &SolverOptions,
) -> Result<SolveOutcome> {
    let mut field = dirichlet.initial_guess(mesh.clone())?;
    let (det, cell, qp) = min_det(&field);
    if !(det > 0.0) {
        return Err(Error::InadmissibleBoundary { cell, qp, det });
    }
    let mut energy = assemble_energy(&field, model)?;
    let mut res = assemble_residual(&field, model)?;
    let r0 = residual_norm(&res);
    let target = opts.tol * (1.0 + r0);
    let mut outcome = SolveOutcome {
        field: field.clone(),
        iterations: 0,
        residual_norm: r0,
        initial_residual: r0,
        converged: false,
        energy_history: vec![energy],
        gradient_steps: 0,
    };

    for it in 0..=opts.max_iter {
        let rnorm = residual_norm(&res);
        outcome.iterations = it;
        outcome.residual_norm = rnorm;
        outcome.field = field.clone();
        if rnorm <= target {
            outcome.converged = true;
            return Ok(outcome);
        }
        if it == opts.max_iter {
            break;
        }

        let r = DVector::from_iterator(res.len() * 3, res.iter().flat_map(|v| v.iter().copied()));
        let k: DMatrix<f64> = assemble_tangent(&field, model)?;
        let mut dir = match k.cholesky() {
            Some(ch) => ch.solve(&(-&r)),
            None => -&r,
        };
        let mut slope = r.dot(&dir);
        if !(slope < 0.0) {
            dir = -&r;
            slope = -r.norm_squared();
        }
        if dir == -&r {
            outcome.gradient_steps += 1;
        }

        let det_floor = MIN_STEP_DET.min(0.5 * min_det(&field).0);
        let dofs = field.to_dofs();
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut trial = field.clone();
            trial.set_dofs(&(&dofs + &dir * alpha));
            if min_det(&trial).0 <= det_floor {
                alpha *= 0.5;
                continue;
            }
            let e = assemble_energy(&trial, model)?;
            if e <= energy + ARMIJO * alpha * slope {
                accepted = Some((trial, e, None));
                break;
            }
            // Near the minimum the Armijo decrease drowns in roundoff; accept
            // a non-increasing step that still reduces the residual.
            if e <= energy {
                let tr = assemble_residual(&trial, model)?;
                if residual_norm(&tr) < rnorm {
                    accepted = Some((trial, e, Some(tr)));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((trial, e, tr)) = accepted else {
            break;
        };
        field = trial;
        energy = e;
        res = match tr {
            Some(tr) => tr,
            None => assemble_residual(&field, model)?,
        };
        outcome.energy_history.push(energy);
    }
    outcome.field = field;
    outcome.residual_norm = residual_norm(&res);
    Err(Error::SolverNoConvergence(Box::new(outcome)))
}
