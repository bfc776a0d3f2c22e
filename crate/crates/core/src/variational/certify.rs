use serde::Serialize;

use super::assembly::{assemble_residual, quadrature_gradients, residual_norm};
use super::field::DeformationField;
use super::mesh::QP_PER_CELL;
use crate::convexity::{ConvexityReport, Verdict};
use crate::models::EnergyModel;
use crate::tensor::{det3, right_cauchy_green, spectral};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifyOptions {
    /// Absolute bound on the Euclidean norm of the free residual.
    pub tol_residual: f64,
    /// Relative strictness margin: `λ_min(S₂) > tol_pd·(1 + ‖S₂‖)`.
    pub tol_pd: f64,
    pub min_det: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            tol_residual: 1e-8,
            tol_pd: 1e-8,
            min_det: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    GlobalMinimizer,
    Refused,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    ConvexityEvidence,
    Residual,
    S2PositiveDefinite,
    Admissibility,
}

impl Gate {
    pub fn description(&self) -> &'static str {
        match self {
            Gate::ConvexityEvidence => "convexity in C not established",
            Gate::Residual => "residual above tolerance",
            Gate::S2PositiveDefinite => "S2 not positive definite",
            Gate::Admissibility => "det F below admissibility bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateFailure {
    pub gate: Gate,
    pub reason: String,
}

/// Quadrature point, identified by cell and local index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraturePoint {
    pub cell: usize,
    pub qp: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: CertificateStatus,
    pub failing_gates: Vec<GateFailure>,
    pub residual_norm: f64,
    /// Smallest eigenvalue of S₂ over all quadrature points.
    pub min_s2_eigenvalue: f64,
    pub min_s2_point: Option<QuadraturePoint>,
    pub min_det_f: f64,
    pub min_det_point: Option<QuadraturePoint>,
    pub convexity_evidence: ConvexityReport,
    pub tolerances: CertifyOptions,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn is_global_minimizer(&self) -> bool {
        self.status == CertificateStatus::GlobalMinimizer
    }

    pub fn failed(&self, gate: Gate) -> bool {
        self.failing_gates.iter().any(|g| g.gate == gate)
    }
}

/// Global-minimizer certificate for a discrete equilibrium of an energy
/// convex in C: small residual, strictly positive definite S₂ at every
/// quadrature point and `det F` bounded away from zero. Refusal is a value.
pub fn certify_global(
    field: &DeformationField,
    model: &dyn EnergyModel,
    evidence: &ConvexityReport,
    opts: &CertifyOptions,
) -> Certificate {
    let mut failures = Vec::new();
    let mut notes = vec![
        "quadrature-point check: positivity of S2 is verified at the 2x2x2 Gauss points of every cell, not pointwise in the domain".to_string(),
    ];

    if evidence.verdict != Verdict::Convex {
        failures.push(GateFailure {
            gate: Gate::ConvexityEvidence,
            reason: format!(
                "evidence verdict is {:?} ({})",
                evidence.verdict, evidence.label
            ),
        });
    }

    let grads = quadrature_gradients(field);
    let mut min_det_f = f64::INFINITY;
    let mut min_det_point = None;
    let mut min_eig = f64::INFINITY;
    let mut min_eig_point = None;
    let mut pd_violation: Option<(f64, f64, QuadraturePoint)> = None;
    let mut s2_error = None;
    for (k, f) in grads.iter().enumerate() {
        let point = QuadraturePoint {
            cell: k / QP_PER_CELL,
            qp: k % QP_PER_CELL,
        };
        let d = det3(f);
        if d < min_det_f || d.is_nan() {
            min_det_f = d;
            min_det_point = Some(point);
        }
        if !(d > 0.0) {
            continue;
        }
        let eval = right_cauchy_green(f)
            .and_then(|c| model.s2(&c))
            .and_then(|s| {
                let lambda = spectral(&s)?.eigenvalues[0];
                Ok((lambda, s.norm()))
            });
        match eval {
            Ok((lambda, norm)) => {
                if lambda < min_eig {
                    min_eig = lambda;
                    min_eig_point = Some(point);
                }
                let margin = opts.tol_pd * (1.0 + norm);
                if !(lambda > margin) && pd_violation.is_none_or(|(l, _, _)| lambda < l) {
                    pd_violation = Some((lambda, margin, point));
                }
            }
            Err(e) => {
                s2_error.get_or_insert((e.to_string(), point));
            }
        }
    }

    let residual = if min_det_f > 0.0 {
        match assemble_residual(field, model) {
            Ok(r) => residual_norm(&r),
            Err(_) => f64::INFINITY,
        }
    } else {
        f64::INFINITY
    };
    if !(residual <= opts.tol_residual) {
        failures.push(GateFailure {
            gate: Gate::Residual,
            reason: format!("residual norm {residual:e} exceeds {:e}", opts.tol_residual),
        });
    }
    if let Some((lambda, margin, p)) = pd_violation {
        failures.push(GateFailure {
            gate: Gate::S2PositiveDefinite,
            reason: format!(
                "S2 not positive definite: lambda_min = {lambda:e} <= {margin:e} at cell {}, point {}",
                p.cell, p.qp
            ),
        });
        if lambda.abs() <= margin {
            notes.push(
                "semidefinite boundary case: strict positive definiteness is required".into(),
            );
        }
    }
    if let Some((msg, p)) = s2_error {
        failures.push(GateFailure {
            gate: Gate::S2PositiveDefinite,
            reason: format!(
                "S2 could not be evaluated at cell {}, point {}: {msg}",
                p.cell, p.qp
            ),
        });
    }
    if !(min_det_f >= opts.min_det) {
        failures.push(GateFailure {
            gate: Gate::Admissibility,
            reason: format!("min det F = {min_det_f:e} below {:e}", opts.min_det),
        });
    }
    // Residual is measured on free nodes; with no free nodes it is trivially zero.
    if field.mesh.free_nodes().next().is_none() {
        notes.push("no free nodes: the field is fully prescribed".into());
    }

    Certificate {
        status: if failures.is_empty() {
            CertificateStatus::GlobalMinimizer
        } else {
            CertificateStatus::Refused
        },
        failing_gates: failures,
        residual_norm: residual,
        min_s2_eigenvalue: min_eig,
        min_s2_point: min_eig_point,
        min_det_f,
        min_det_point,
        convexity_evidence: evidence.clone(),
        tolerances: *opts,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use nalgebra::Vector3;

    use super::*;
    use crate::convexity::Property;
    use crate::models::{Prop2Quadratic, SaintVenantKirchhoff};
    use crate::tensor::Mat3;
    use crate::variational::mesh::HexMesh;

    fn setup(f0: Mat3) -> (DeformationField, Prop2Quadratic, ConvexityReport) {
        let mesh = Arc::new(HexMesh::unit_cube(4).unwrap());
        let model = Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap();
        let ev = ConvexityReport::from_model_claim(&model).unwrap();
        (
            DeformationField::affine(mesh, &f0, &Vector3::zeros()),
            model,
            ev,
        )
    }

    #[test]
    fn tension_is_certified() {
        let (field, model, ev) = setup(Mat3::from_diagonal(&Vector3::new(1.2, 1.1, 1.05)));
        let cert = certify_global(&field, &model, &ev, &CertifyOptions::default());
        assert!(cert.is_global_minimizer(), "{:?}", cert.failing_gates);
        assert!(cert.min_s2_eigenvalue > 0.0);
        assert!((cert.min_det_f - 1.2 * 1.1 * 1.05).abs() < 1e-13);
    }

    #[test]
    fn compression_is_refused_at_stress_gate() {
        let (field, model, ev) = setup(Mat3::identity() * 0.5);
        let cert = certify_global(&field, &model, &ev, &CertifyOptions::default());
        assert_eq!(cert.status, CertificateStatus::Refused);
        assert!(cert.failed(Gate::S2PositiveDefinite));
        assert!(!cert.failed(Gate::Residual));
        assert!((cert.min_s2_eigenvalue + 7.5).abs() < 1e-9);
    }

    #[test]
    fn natural_state_is_a_boundary_refusal() {
        let (field, model, ev) = setup(Mat3::identity());
        let cert = certify_global(&field, &model, &ev, &CertifyOptions::default());
        assert!(cert.failed(Gate::S2PositiveDefinite));
        assert!(cert.notes.iter().any(|n| n.contains("semidefinite")));
    }

    #[test]
    fn missing_evidence_is_refused() {
        let (field, _, _) = setup(Mat3::from_diagonal(&Vector3::new(1.2, 1.1, 1.05)));
        let ev = ConvexityReport::analytic(Property::ConvexInC, false, "no claim");
        let cert = certify_global(
            &field,
            &SaintVenantKirchhoff::new(1.0, 1.0),
            &ev,
            &CertifyOptions::default(),
        );
        assert!(cert.failed(Gate::ConvexityEvidence));
    }

    #[test]
    fn serializes_status() {
        let (field, model, ev) = setup(Mat3::identity() * 0.5);
        let cert = certify_global(&field, &model, &ev, &CertifyOptions::default());
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["status"], "refused");
        assert_eq!(v["failing_gates"][0]["gate"], "s2_positive_definite");
    }
}
