use super::{check_domain, inverse_pd, log_det, Capabilities, EnergyModel, CONSTRAINT_TOL};
use crate::error::{Error, Result};
use crate::scalar::ScalarC2Function;
use crate::tensor::{KelvinOperator, SymMat3};

/// `Ŵ(C) = α tr C + β tr(C²) − log det C` with `α + 2β = 1`, `α, β > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceModel {
    alpha: f64,
    beta: f64,
    constrained: bool,
}

impl TraceModel {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "trace model requires alpha > 0 and beta > 0 (got {alpha}, {beta})"
            )));
        }
        let residual = alpha + 2.0 * beta - 1.0;
        if residual.abs() > CONSTRAINT_TOL {
            return Err(Error::InvalidParameter(format!(
                "trace model requires alpha + 2 beta = 1 (residual {residual:e})"
            )));
        }
        Ok(TraceModel {
            alpha,
            beta,
            constrained: true,
        })
    }

    pub fn unconstrained(alpha: f64, beta: f64) -> Self {
        TraceModel {
            alpha,
            beta,
            constrained: false,
        }
    }
}

impl EnergyModel for TraceModel {
    fn name(&self) -> &str {
        "trace"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("beta", self.beta)]
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
        Ok(self.alpha * c.trace() + self.beta * c.dot(c) - log_det(c)?)
    }

    fn s2(&self, c: &SymMat3) -> Result<SymMat3> {
        check_domain(c)?;
        let d = SymMat3::scaled_identity(self.alpha) + *c * (2.0 * self.beta) - inverse_pd(c)?;
        Ok(d * 2.0)
    }

    fn hessian_c(&self, c: &SymMat3) -> Result<KelvinOperator> {
        check_domain(c)?;
        Ok(KelvinOperator::identity() * (2.0 * self.beta)
            + KelvinOperator::congruence(&inverse_pd(c)?))
    }

    fn det_term(&self) -> Option<ScalarC2Function> {
        Some(ScalarC2Function::neg_log(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stress_free_under_constraint() {
        for alpha in [0.1, 0.5, 0.9] {
            let m = TraceModel::new(alpha, 0.5 * (1.0 - alpha)).unwrap();
            assert!(m.s2(&SymMat3::identity()).unwrap().norm() <= 1e-12);
        }
        assert!(TraceModel::new(0.5, 0.5).is_err());
    }
}
