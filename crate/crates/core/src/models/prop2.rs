use super::{check_domain, inverse_pd, log_det, Capabilities, EnergyModel, CONSTRAINT_TOL};
use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;
use crate::tensor::{KelvinOperator, SymMat3};

/// `Ŵ(C) = α(tr C)² + β tr(C²) − log det C`.
///
/// The reference configuration is stress free iff `6α + 2β = 1`; [`new`]
/// enforces this together with `α, β > 0`.
///
/// [`new`]: Prop2Quadratic::new
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prop2Quadratic {
    alpha: f64,
    beta: f64,
    constrained: bool,
}

impl Prop2Quadratic {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "prop2_quadratic requires alpha > 0 and beta > 0 (got {alpha}, {beta})"
            )));
        }
        let residual = 6.0 * alpha + 2.0 * beta - 1.0;
        if residual.abs() > CONSTRAINT_TOL {
            return Err(Error::InvalidParameter(format!(
                "prop2_quadratic requires 6 alpha + 2 beta = 1 (residual {residual:e})"
            )));
        }
        Ok(Prop2Quadratic {
            alpha,
            beta,
            constrained: true,
        })
    }

    /// `β = (1 − 6α)/2`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.5 * (1.0 - 6.0 * alpha))
    }

    /// Any parameters; makes no convexity claim.
    pub fn unconstrained(alpha: f64, beta: f64) -> Self {
        Prop2Quadratic {
            alpha,
            beta,
            constrained: false,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl EnergyModel for Prop2Quadratic {
    fn name(&self) -> &str {
        "prop2_quadratic"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("beta", self.beta)]
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_analytic_hessian: true,
            claims_convex_in_c: self.constrained,
            claims_polyconvex: self.constrained,
        }
    }

    fn energy(&self, c: &SymMat3) -> Result<f64> {
        check_domain(c)?;
        let tr = c.trace();
        Ok(self.alpha * tr * tr + self.beta * c.dot(c) - log_det(c)?)
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        let d = SymMat3::scaled_identity(2.0 * self.alpha * c.trace()) + *c * (2.0 * self.beta)
            - inverse_pd(c)?;
        Ok(d * 2.0)
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        Ok(KelvinOperator::trace_squared() * (2.0 * self.alpha)
            + KelvinOperator::identity() * (2.0 * self.beta)
            + KelvinOperator::congruence(&inverse_pd(c)?))
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        Some(ScalarC2Function::neg_log(1.0))
    }
}
