use serde::Serialize;

use super::{check_domain, inverse_pd, log_det, Capabilities, EnergyModel, CONSTRAINT_TOL};
use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;
use crate::tensor::{KelvinOperator, SymMat3};

/// Compressible Neo-Hooke member `Ŵ(C) = μ(α(tr C)² + β tr C − log det C)`.
///
/// `D_C Ŵ(I) = μ(6α + β − 1)·I`, so the reference configuration is stress
/// free iff `β = 1 − 6α`. The constraint is enforced by [`new`].
///
/// [`new`]: NeoHookeMember::new
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeoHookeMember {
    mu: f64,
    alpha: f64,
    beta: f64,
    constrained: bool,
}

/// Small-strain response `μ‖dev ε‖² + μ(2α + 1/3)(tr ε)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearizedResponse {
    pub shear_modulus: f64,
    /// Coefficient of `(tr ε)²`.
    pub bulk_coefficient: f64,
    pub poisson: f64,
}

impl LinearizedResponse {
    /// Quadratic form of the response at the strain `eps`.
    pub fn energy(&self, eps: &SymMat3) -> f64 {
        let dev = crate::tensor::deviator(eps);
        let tr = eps.trace();
        self.shear_modulus * dev.dot(&dev) + self.bulk_coefficient * tr * tr
    }
}

impl NeoHookeMember {
    pub fn new(mu: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(mu > 0.0 && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "neo_hooke requires mu > 0 and alpha > 0 (got {mu}, {alpha})"
            )));
        }
        let residual = 6.0 * alpha + beta - 1.0;
        if residual.abs() > CONSTRAINT_TOL {
            return Err(Error::InvalidParameter(format!(
                "neo_hooke requires 6 alpha + beta = 1 for a stress-free reference (residual {residual:e})"
            )));
        }
        Ok(NeoHookeMember {
            mu,
            alpha,
            beta,
            constrained: true,
        })
    }

    pub fn from_alpha(mu: f64, alpha: f64) -> Result<Self> {
        Self::new(mu, alpha, 1.0 - 6.0 * alpha)
    }

    pub fn unconstrained(mu: f64, alpha: f64, beta: f64) -> Self {
        NeoHookeMember {
            mu,
            alpha,
            beta,
            constrained: false,
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn linearized_response(&self) -> LinearizedResponse {
        let four_alpha = 4.0 * self.alpha;
        LinearizedResponse {
            shear_modulus: self.mu,
            bulk_coefficient: self.mu * (2.0 * self.alpha + 1.0 / 3.0),
            poisson: 0.5 * four_alpha / (four_alpha + 1.0),
        }
    }
}

impl EnergyModel for NeoHookeMember {
    fn name(&self) -> &str {
        "neo_hooke"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu), ("alpha", self.alpha), ("beta", self.beta)]
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_analytic_hessian: true,
            claims_convex_in_c: self.constrained,
            claims_polyconvex: false,
        }
    }

    fn energy(&self, c: &SymMat3) -> Result<f64> {
        check_domain(c)?;
        let tr = c.trace();
        Ok(self.mu * (self.alpha * tr * tr + self.beta * tr - log_det(c)?))
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        let d = SymMat3::scaled_identity(2.0 * self.alpha * c.trace() + self.beta) - inverse_pd(c)?;
        Ok(d * (2.0 * self.mu))
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        Ok((KelvinOperator::trace_squared() * (2.0 * self.alpha)
            + KelvinOperator::congruence(&inverse_pd(c)?))
            * self.mu)
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        Some(ScalarC2Function::neg_log(self.mu))
    }

    fn notes(&self) -> Vec<String> {
        if self.constrained {
            vec!["stress-free constraint 6*alpha + beta = 1 derived from D_C W(I) = 0".into()]
        } else {
            Vec::new()
        }
    }
}
