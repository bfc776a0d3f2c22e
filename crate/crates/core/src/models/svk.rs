use super::{check_domain, Capabilities, EnergyModel};
use crate::error::Result;
use crate::tensor::{KelvinOperator, SymMat3};

/// Saint Venant-Kirchhoff, `Ŵ(C) = (μ/4)‖C − I‖² + (λ/8)(tr(C − I))²`.
///
/// The C-Hessian is the constant form `(μ/2)‖H‖² + (λ/4)(tr H)²`, with
/// eigenvalues `μ/2` (five-fold) and `(2μ + 3λ)/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaintVenantKirchhoff {
    pub mu: f64,
    pub lambda: f64,
}

impl SaintVenantKirchhoff {
    pub fn new(mu: f64, lambda: f64) -> Self {
        SaintVenantKirchhoff { mu, lambda }
    }
}

impl EnergyModel for SaintVenantKirchhoff {
    fn name(&self) -> &str {
        "svk"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu), ("lambda", self.lambda)]
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_analytic_hessian: true,
            claims_convex_in_c: self.mu > 0.0 && 3.0 * self.lambda + 2.0 * self.mu > 0.0,
            claims_polyconvex: false,
        }
    }

    fn energy(&self, c: &SymMat3) -> Result<f64> {
        check_domain(c)?;
        let e = *c - SymMat3::identity();
        let tr = e.trace();
        Ok(0.25 * self.mu * e.dot(&e) + 0.125 * self.lambda * tr * tr)
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        let e = *c - SymMat3::identity();
        Ok(e * self.mu + SymMat3::scaled_identity(0.5 * self.lambda * e.trace()))
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        Ok(KelvinOperator::identity() * (0.5 * self.mu)
            + KelvinOperator::trace_squared() * (0.25 * self.lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::PsymSampler;

    #[test]
    fn reference_values() {
        let m = SaintVenantKirchhoff::new(1.0, 0.0);
        assert_eq!(m.energy(&SymMat3::identity()).unwrap(), 0.0);
        assert_eq!(
            m.energy(&SymMat3::from_diagonal([4.0, 1.0, 1.0])).unwrap(),
            2.25
        );
    }

    #[test]
    fn hessian_spectrum() {
        let m = SaintVenantKirchhoff::new(1.0, 0.0);
        let c = PsymSampler::new(1, 1.0).sample(0);
        for ev in m.hessian_c(&c).unwrap().eigenvalues().unwrap() {
            assert!((ev - 0.5).abs() < 1e-14);
        }
        let m = SaintVenantKirchhoff::new(1.0, -1.0);
        let ev = m.hessian_c(&c).unwrap().eigenvalues().unwrap();
        assert!((ev[0] + 0.25).abs() < 1e-14);
    }

    #[test]
    fn convexity_parameter_condition() {
        let sampler = PsymSampler::new(8, 1.5);
        for (mu, lambda) in [(1.0, 1.0), (1.0, -0.6), (2.0, 0.0), (0.5, 3.0)] {
            let m = SaintVenantKirchhoff::new(mu, lambda);
            assert!(m.capabilities().claims_convex_in_c);
            for k in 0..50 {
                let ev = m
                    .hessian_c(&sampler.sample(k))
                    .unwrap()
                    .eigenvalues()
                    .unwrap();
                assert!(ev[0] >= -1e-10);
            }
        }
        let m = SaintVenantKirchhoff::new(1.0, -0.7);
        assert!(!m.capabilities().claims_convex_in_c);
        assert!(
            m.hessian_c(&sampler.sample(0))
                .unwrap()
                .eigenvalues()
                .unwrap()[0]
                < 0.0
        );
    }
}
