//! Hyperelastic energies written as functions of the right Cauchy-Green
//! tensor, `W(F) = Ŵ(FᵀF)`.
//!
//! Every model provides the energy, the second Piola-Kirchhoff stress
//! `S₂(C) = 2 D_C Ŵ(C)` and, when available, the C-Hessian as a
//! [`KelvinOperator`] representing `H ↦ D²_C Ŵ(C)[H, H]`. The first
//! Piola-Kirchhoff stress `S₁(F) = F·S₂(FᵀF)` is derived from these.

mod chain;
mod det_function;
mod neo_hooke;
mod prop2;
mod spec;
mod svk;
mod trace_model;
mod valanis_landel;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;
use crate::tensor::{
    det3, right_cauchy_green, spectral, KelvinOperator, KelvinVec6, Mat3, SymMat3,
};

pub use chain::{GradientTangent, Matrix9};
pub use det_function::{DetFunctionModel, NegLogDet};
pub use neo_hooke::{LinearizedResponse, NeoHookeMember};
pub use prop2::Prop2Quadratic;
pub use spec::ModelSpec;
pub use svk::SaintVenantKirchhoff;
pub use trace_model::TraceModel;
pub use valanis_landel::{valanis_landel_energy, ValanisLandelModel};

/// Tolerance on parameter constraints checked at construction.
pub const CONSTRAINT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub has_analytic_hessian: bool,
    /// The model's parameters satisfy a closed-form sufficient condition for
    /// convexity in C.
    pub claims_convex_in_c: bool,
    pub claims_polyconvex: bool,
}

pub trait EnergyModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn parameters(&self) -> Vec<(&'static str, f64)>;

    fn capabilities(&self) -> Capabilities;

    fn energy(&self, c: &SymMat3) -> Result<f64>;

    /// Second Piola-Kirchhoff stress `2 D_C Ŵ(C)`.
    fn s2(&self, c: &SymMat3) -> Result<SymMat3>;

    /// Analytic `D²_C Ŵ(C)` in Kelvin coordinates.
    fn hessian_c(&self, _c: &SymMat3) -> Result<KelvinOperator> {
        Err(Error::NotAvailable("C-Hessian"))
    }

    /// `f` when the energy contains an additive term `f(det C)`.
    fn det_term(&self) -> Option<ScalarC2Function> {
        None
    }

    /// `w̃` when the energy contains an additive term `Σ w̃(λᵢ(C))`.
    fn spectral_term(&self) -> Option<ScalarC2Function> {
        None
    }

    /// Remarks recorded in reports.
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Requires `C` to lie in the open cone of positive-definite tensors.
pub fn check_domain(c: &SymMat3) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::domain("C has non-finite entries"));
    }
    if !c.is_pd_sylvester() {
        return Err(Error::domain(format!(
            "C is not positive definite (det C = {:e})",
            c.det()
        )));
    }
    Ok(())
}

pub(crate) fn inverse_pd(c: &SymMat3) -> Result<SymMat3> {
    c.inverse()
        .ok_or_else(|| Error::domain("C is not invertible"))
}

/// `log det C` as a sum of logarithms of eigenvalues.
pub fn log_det(c: &SymMat3) -> Result<f64> {
    let d = spectral(c)?;
    if d.eigenvalues[0] <= 0.0 {
        return Err(Error::domain(format!(
            "log det of a matrix with eigenvalue {:e}",
            d.eigenvalues[0]
        )));
    }
    Ok(d.eigenvalues.iter().map(|l| l.ln()).sum())
}

/// Energy as a function of the deformation gradient.
pub fn energy_of_gradient(model: &dyn EnergyModel, f: &Mat3) -> Result<f64> {
    model.energy(&gradient_to_c(f)?)
}

/// `C = FᵀF`, rejecting orientation-reversing or singular F.
pub fn gradient_to_c(f: &Mat3) -> Result<SymMat3> {
    let det = det3(f);
    if det <= 0.0 {
        return Err(Error::SingularGradient { det });
    }
    right_cauchy_green(f)
}

/// First Piola-Kirchhoff stress `F·S₂(FᵀF)`.
pub fn s1(model: &dyn EnergyModel, f: &Mat3) -> Result<Mat3> {
    let c = gradient_to_c(f)?;
    Ok(f * model.s2(&c)?.into_matrix())
}

/// A C-Hessian together with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct HessianEval {
    pub operator: KelvinOperator,
    /// `false` when the operator came from finite differences of `S₂`.
    pub analytic: bool,
}

/// Analytic C-Hessian, or a central-difference approximation from `S₂`
/// when the model has none.
pub fn hessian_c(model: &dyn EnergyModel, c: &SymMat3) -> Result<HessianEval> {
    match model.hessian_c(c) {
        Ok(operator) => Ok(HessianEval {
            operator,
            analytic: true,
        }),
        Err(Error::NotAvailable(_)) => {
            let lambda_min = spectral(c)?.eigenvalues[0];
            let h = 1e-5 * lambda_min.min(1.0);
            Ok(HessianEval {
                operator: fd_hessian(model, c, h)?,
                analytic: false,
            })
        }
        Err(e) => Err(e),
    }
}

/// Column `k` is `(S₂(C + hE_k) − S₂(C − hE_k)) / 4h` in Kelvin coordinates.
fn fd_hessian(model: &dyn EnergyModel, c: &SymMat3, h: f64) -> Result<KelvinOperator> {
    let mut m = nalgebra::Matrix6::zeros();
    for k in 0..6 {
        let e = KelvinVec6::basis(k);
        let plus = model.s2(&(*c + e * h))?;
        let minus = model.s2(&(*c - e * h))?;
        let col = crate::tensor::sym_to_kelvin(&((plus - minus) * (0.25 / h))).0;
        m.set_column(k, &col);
    }
    Ok(KelvinOperator(m).symmetrized())
}

/// Maximum relative deviations between analytic derivatives and central
/// finite differences.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DerivativeReport {
    /// FD gradient of the energy against `S₂/2`.
    pub gradient_error: f64,
    /// FD of `S₂/2` against the C-Hessian.
    pub hessian_error: f64,
    pub hessian_analytic: bool,
    pub step: f64,
}

/// Central differences with step `h` along the orthonormal Kelvin basis.
/// Errors are `‖fd − analytic‖_∞ / (1 + ‖analytic‖_∞)`.
pub fn verify_derivatives(
    model: &dyn EnergyModel,
    c: &SymMat3,
    h: f64,
) -> Result<DerivativeReport> {
    assert!(h > 0.0, "step must be positive");
    check_domain(c)?;
    let half_s2 = crate::tensor::sym_to_kelvin(&(model.s2(c)? * 0.5)).0;
    let hess = hessian_c(model, c)?;

    let mut grad_fd = nalgebra::Vector6::zeros();
    let mut hess_fd = nalgebra::Matrix6::zeros();
    for k in 0..6 {
        let e = KelvinVec6::basis(k);
        let cp = *c + e * h;
        let cm = *c - e * h;
        check_domain(&cp)?;
        check_domain(&cm)?;
        grad_fd[k] = (model.energy(&cp)? - model.energy(&cm)?) / (2.0 * h);
        let ds2 = (model.s2(&cp)? - model.s2(&cm)?) * (0.25 / h);
        hess_fd.set_column(k, &crate::tensor::sym_to_kelvin(&ds2).0);
    }
    let gradient_error = (grad_fd - half_s2).amax() / (1.0 + half_s2.amax());
    let hessian_error = (hess_fd - hess.operator.0).amax() / (1.0 + hess.operator.0.amax());
    Ok(DerivativeReport {
        gradient_error,
        hessian_error,
        hessian_analytic: hess.analytic,
        step: h,
    })
}

/// Second derivative of `t ↦ Σ w̃(λᵢ(C + tH))` as a Kelvin operator, using
/// divided differences of `w̃′` between distinct eigenvalues.
pub(crate) fn spectral_hessian(w: &ScalarC2Function, c: &SymMat3) -> Result<KelvinOperator> {
    let d = spectral(c)?;
    let lam = d.eigenvalues;
    let q = d.eigenvectors;
    let mut theta = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            theta[i][j] = if i == j {
                w.d2(lam[i])
            } else {
                let gap = lam[i] - lam[j];
                if gap.abs() <= 1e-6 * (lam[i].abs() + lam[j].abs()) {
                    0.5 * (w.d2(lam[i]) + w.d2(lam[j]))
                } else {
                    (w.d1(lam[i]) - w.d1(lam[j])) / gap
                }
            };
        }
    }
    let rotated: Vec<Mat3> = (0..6)
        .map(|k| q.transpose() * KelvinVec6::basis(k).into_matrix() * q)
        .collect();
    let mut m = nalgebra::Matrix6::zeros();
    for k in 0..6 {
        for l in k..6 {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    v += theta[i][j] * rotated[k][(i, j)] * rotated[l][(i, j)];
                }
            }
            m[(k, l)] = v;
            m[(l, k)] = v;
        }
    }
    Ok(KelvinOperator(m))
}

/// `S₂` contribution `2f′(det C)·det C·C⁻¹` of the term `f(det C)`.
pub(crate) fn det_term_s2(f: &ScalarC2Function, c: &SymMat3) -> Result<SymMat3> {
    let d = c.det();
    Ok(inverse_pd(c)? * (2.0 * f.d1(d) * d))
}

/// `D²[H,H] = f″d²a² + f′d(a² − ⟨C⁻¹HC⁻¹, H⟩)` with `a = tr(C⁻¹H)`.
pub(crate) fn det_term_hessian(f: &ScalarC2Function, c: &SymMat3) -> Result<KelvinOperator> {
    let d = c.det();
    let c_inv = inverse_pd(c)?;
    let (d1, d2) = (f.d1(d), f.d2(d));
    Ok(KelvinOperator::outer(&c_inv) * (d2 * d * d + d1 * d)
        + KelvinOperator::congruence(&c_inv) * (-d1 * d))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tensor::{random_rotation, rng_for, PsymSampler};
    use rand::Rng;

    /// Minimal model without an analytic Hessian.
    #[derive(Debug)]
    struct CubicTrace;

    impl EnergyModel for CubicTrace {
        fn name(&self) -> &str {
            "cubic_trace"
        }
        fn parameters(&self) -> Vec<(&'static str, f64)> {
            vec![]
        }
        fn capabilities(&self) -> Capabilities {
            Capabilities::default()
        }
        fn energy(&self, c: &SymMat3) -> Result<f64> {
            Ok(c.trace().powi(3))
        }
        fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
            Ok(SymMat3::scaled_identity(6.0 * c.trace().powi(2)))
        }
    }

    pub(crate) fn all_models() -> Vec<Box<dyn EnergyModel>> {
        vec![
            Box::new(NegLogDet::new()),
            Box::new(Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap()),
            Box::new(TraceModel::new(0.5, 0.25).unwrap()),
            Box::new(NeoHookeMember::from_alpha(1.3, 0.1).unwrap()),
            Box::new(SaintVenantKirchhoff::new(1.0, 1.0)),
            Box::new(SaintVenantKirchhoff::new(1.0, -1.0)),
            Box::new(DetFunctionModel::new(ScalarC2Function::power(1.0, -1.0))),
            Box::new(ValanisLandelModel::new(
                ScalarC2Function::power(1.0, 2.0),
                Some(ScalarC2Function::neg_log(1.0)),
            )),
            Box::new(ValanisLandelModel::new(
                ScalarC2Function::power(1.0, 0.5),
                None,
            )),
        ]
    }

    #[test]
    fn fd_fallback_is_flagged_and_accurate() {
        let c = PsymSampler::new(1, 1.0).sample(0);
        let h = hessian_c(&CubicTrace, &c).unwrap();
        assert!(!h.analytic);
        // D²(tr C)³[H,H] = 6 tr C (tr H)²
        let expected = KelvinOperator::trace_squared() * (6.0 * c.trace());
        assert!((h.operator.0 - expected.0).amax() <= 1e-6 * (1.0 + expected.0.amax()));
    }

    #[test]
    fn frame_indifference() {
        let mut rng = rng_for(21, 0);
        for model in all_models() {
            for _ in 0..50 {
                let f = Mat3::identity() + Mat3::from_fn(|_, _| rng.random_range(-0.3..0.3));
                let r = random_rotation(&mut rng);
                let w = energy_of_gradient(model.as_ref(), &f).unwrap();
                let w_rot = energy_of_gradient(model.as_ref(), &(r * f)).unwrap();
                assert!(
                    (w - w_rot).abs() <= 1e-13 * (1.0 + w.abs()),
                    "{}",
                    model.name()
                );
            }
        }
    }

    #[test]
    fn s1_matches_fd_of_energy_in_f() {
        let mut rng = rng_for(22, 0);
        for model in all_models() {
            for _ in 0..20 {
                let f = Mat3::identity() + Mat3::from_fn(|_, _| rng.random_range(-0.3..0.3));
                let p = s1(model.as_ref(), &f).unwrap();
                let h = 1e-5 * (1.0 + f.norm());
                let mut fd = Mat3::zeros();
                for i in 0..3 {
                    for j in 0..3 {
                        let mut fp = f;
                        let mut fm = f;
                        fp[(i, j)] += h;
                        fm[(i, j)] -= h;
                        fd[(i, j)] = (energy_of_gradient(model.as_ref(), &fp).unwrap()
                            - energy_of_gradient(model.as_ref(), &fm).unwrap())
                            / (2.0 * h);
                    }
                }
                let err = (fd - p).amax() / (1.0 + p.amax());
                assert!(err <= 1e-6, "{}: {err}", model.name());
            }
        }
    }

    #[test]
    fn s1_at_rotation_is_rotated_reference_stress() {
        let mut rng = rng_for(23, 0);
        let r = random_rotation(&mut rng);
        for model in all_models() {
            let p = s1(model.as_ref(), &r).unwrap();
            let expected = r * model.s2(&SymMat3::identity()).unwrap().into_matrix();
            assert!((p - expected).amax() <= 1e-12 * (1.0 + expected.amax()));
        }
    }

    #[test]
    fn s1_rejects_reflections() {
        let f = Mat3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, 1.0));
        let m = NegLogDet::new();
        assert!(matches!(s1(&m, &f), Err(Error::SingularGradient { .. })));
    }

    #[test]
    fn hessians_are_symmetric() {
        let c = PsymSampler::new(7, 1.5).sample(3);
        for model in all_models() {
            let h = model.hessian_c(&c).unwrap();
            assert!(
                h.max_asymmetry() <= 1e-12 * (1.0 + h.0.amax()),
                "{}",
                model.name()
            );
        }
    }

    #[test]
    fn derivative_consistency_over_samples() {
        let sampler = PsymSampler::new(99, 1.0);
        for model in all_models() {
            for k in 0..100 {
                let c = sampler.sample(k);
                let lmin = spectral(&c).unwrap().eigenvalues[0];
                let rep = verify_derivatives(model.as_ref(), &c, 1e-4 * lmin.min(1.0)).unwrap();
                assert!(
                    rep.gradient_error <= 1e-5,
                    "{} grad {:e}",
                    model.name(),
                    rep.gradient_error
                );
                assert!(
                    rep.hessian_error <= 1e-5,
                    "{} hess {:e}",
                    model.name(),
                    rep.hessian_error
                );
            }
        }
    }

    #[test]
    fn verify_derivatives_rejects_steps_leaving_the_cone() {
        let c = SymMat3::from_diagonal([1e-3, 1.0, 1.0]);
        let m = NegLogDet::new();
        assert!(matches!(
            verify_derivatives(&m, &c, 1e-2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_det_blow_up_is_monotone() {
        let models: Vec<Box<dyn EnergyModel>> = vec![
            Box::new(NegLogDet::new()),
            Box::new(Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap()),
            Box::new(TraceModel::new(0.5, 0.25).unwrap()),
            Box::new(NeoHookeMember::from_alpha(1.0, 0.1).unwrap()),
        ];
        for model in models {
            let mut prev = f64::NEG_INFINITY;
            for e in 1..=6 {
                let t = 10f64.powi(-e);
                let w = model
                    .energy(&SymMat3::from_diagonal([t * t, 1.0, 1.0]))
                    .unwrap();
                assert!(w > prev, "{} not increasing at t = {t}", model.name());
                prev = w;
            }
            assert!(prev > 20.0);
        }
    }

    #[test]
    fn energy_outside_cone_is_domain_error() {
        let c = SymMat3::from_diagonal([1.0, 1.0, -1.0]);
        for model in all_models() {
            assert!(
                matches!(model.energy(&c), Err(Error::Domain(_))),
                "{}",
                model.name()
            );
            assert!(
                matches!(model.s2(&c), Err(Error::Domain(_))),
                "{}",
                model.name()
            );
        }
    }
}
