use super::{
    check_domain, det_term_hessian, det_term_s2, inverse_pd, log_det, Capabilities, EnergyModel,
};
use crate::error::Result;
use crate::scalar::ScalarC2Function;
use crate::tensor::{KelvinOperator, SymMat3};

/// `Ŵ(C) = −log det C`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NegLogDet;

impl NegLogDet {
    pub fn new() -> Self {
        NegLogDet
    }
}

impl EnergyModel for NegLogDet {
    fn name(&self) -> &str {
        "neg_log_det"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_analytic_hessian: true,
            claims_convex_in_c: true,
            claims_polyconvex: true,
        }
    }

    fn energy(&self, c: &SymMat3) -> Result<f64> {
        check_domain(c)?;
        Ok(-log_det(c)?)
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        Ok(inverse_pd(c)? * -2.0)
    }

    /// `⟨C⁻¹HC⁻¹, H⟩`, a congruence of the identity form.
    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        Ok(KelvinOperator::congruence(&inverse_pd(c)?))
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        Some(ScalarC2Function::neg_log(1.0))
    }
}

/// `Ŵ(C) = f(det C)` for a caller-supplied scalar function.
#[derive(Clone, Debug)]
pub struct DetFunctionModel {
    f: ScalarC2Function,
}

impl DetFunctionModel {
    pub fn new(f: ScalarC2Function) -> Self {
        DetFunctionModel { f }
    }

    pub fn function(&self) -> &ScalarC2Function {
        &self.f
    }
}

impl EnergyModel for DetFunctionModel {
    fn name(&self) -> &str {
        "det_function"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_analytic_hessian: true,
            ..Capabilities::default()
        }
    }

    fn energy(&self, c: &SymMat3) -> Result<f64> {
        check_domain(c)?;
        Ok(self.f.value(c.det()))
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        det_term_s2(&self.f, c)
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        det_term_hessian(&self.f, c)
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        Some(self.f.clone())
    }

    fn notes(&self) -> Vec<String> {
        vec![format!("f = {}", self.f.name())]
    }
}
