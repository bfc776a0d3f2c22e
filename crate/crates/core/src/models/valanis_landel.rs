use super::{
    check_domain, det_term_hessian, det_term_s2, spectral_hessian, Capabilities, EnergyModel,
};
use crate::error::Result;
use crate::scalar::ScalarC2Function;
use crate::tensor::{spectral, KelvinOperator, SymMat3};

/// `W = w̃(λ₁²) + w̃(λ₂²) + w̃(λ₃²) + g(det C)`, where `λᵢ²` are the
/// eigenvalues of C.
#[derive(Clone, Debug)]
pub struct ValanisLandelModel {
    w: ScalarC2Function,
    g: Option<ScalarC2Function>,
}

impl ValanisLandelModel {
    pub fn new(w: ScalarC2Function, g: Option<ScalarC2Function>) -> Self {
        ValanisLandelModel { w, g }
    }

    pub fn w(&self) -> &ScalarC2Function {
        &self.w
    }

    pub fn g(&self) -> Option<&ScalarC2Function> {
        self.g.as_ref()
    }
}

/// `valanis_landel_energy(model, C)`.
pub fn valanis_landel_energy(model: &ValanisLandelModel, c: &SymMat3) -> Result<f64> {
    model.energy(c)
}

impl EnergyModel for ValanisLandelModel {
    fn name(&self) -> &str {
        "valanis_landel"
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
        let d = spectral(c)?;
        let mut w: f64 = d.eigenvalues.iter().map(|&l| self.w.value(l)).sum();
        if let Some(g) = &self.g {
            w += g.value(c.det());
        }
        Ok(w)
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        let mut s = spectral(c)?.map(|l| self.w.d1(l)) * 2.0;
        if let Some(g) = &self.g {
            s += det_term_s2(g, c)?;
        }
        Ok(s)
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        let mut h = spectral_hessian(&self.w, c)?;
        if let Some(g) = &self.g {
            h += det_term_hessian(g, c)?;
        }
        Ok(h)
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        self.g.clone()
    }

    fn spectral_term(&self) -> Option<ScalarC2Function> {
        Some(self.w.clone())
    }

    fn notes(&self) -> Vec<String> {
        let mut n = vec![format!("w = {}", self.w.name())];
        if let Some(g) = &self.g {
            n.push(format!("g = {}", g.name()));
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::PsymSampler;

    #[test]
    fn linear_w_gives_trace() {
        let m = ValanisLandelModel::new(ScalarC2Function::power(1.0, 1.0), None);
        let c = SymMat3::from_diagonal([4.0, 1.0, 1.0]);
        assert!((valanis_landel_energy(&m, &c).unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_w_gives_trace_of_square() {
        let m = ValanisLandelModel::new(ScalarC2Function::power(1.0, 2.0), None);
        let sampler = PsymSampler::new(12, 1.0);
        for k in 0..50 {
            let c = sampler.sample(k);
            let direct = c.dot(&c);
            assert!((m.energy(&c).unwrap() - direct).abs() <= 1e-12 * (1.0 + direct));
        }
    }

    #[test]
    fn det_part_only() {
        let m = ValanisLandelModel::new(
            ScalarC2Function::zero(),
            Some(ScalarC2Function::neg_log(1.0)),
        );
        let c = SymMat3::from_diagonal([4.0, 1.0, 1.0]);
        assert!((m.energy(&c).unwrap() + 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn repeated_eigenvalues_use_second_derivative() {
        // At C = s·I the spectral Hessian of Σ λᵢ² is 2‖H‖².
        let m = ValanisLandelModel::new(ScalarC2Function::power(1.0, 2.0), None);
        let h = m.hessian_c(&SymMat3::scaled_identity(1.7)).unwrap();
        assert!((h.0 - nalgebra::Matrix6::identity() * 2.0).amax() < 1e-12);
    }
}
