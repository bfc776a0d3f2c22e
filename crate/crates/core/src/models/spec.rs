use serde::{Deserialize, Serialize};

use super::{
    DetFunctionModel, EnergyModel, NegLogDet, NeoHookeMember, Prop2Quadratic, SaintVenantKirchhoff,
    TraceModel, ValanisLandelModel,
};
use crate::error::{Error, Result};
use crate::scalar::ScalarSpec;

/// Model name plus parameter map, as found in configuration files.
///
/// ```
/// use cgconvex::models::ModelSpec;
/// let spec: ModelSpec = serde_json::from_str(r#"{"name": "svk", "mu": 1.0, "lambda": 0.0}"#).unwrap();
/// let model = spec.build().unwrap();
/// assert_eq!(model.name(), "svk");
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    NegLogDet,
    Prop2Quadratic {
        alpha: f64,
        /// Defaults to the stress-free value `(1 − 6α)/2`.
        beta: Option<f64>,
        #[serde(default)]
        unconstrained: bool,
    },
    Trace {
        alpha: f64,
        /// Defaults to `(1 − α)/2`.
        beta: Option<f64>,
        #[serde(default)]
        unconstrained: bool,
    },
    NeoHooke {
        mu: f64,
        alpha: f64,
        /// Defaults to `1 − 6α`.
        beta: Option<f64>,
        #[serde(default)]
        unconstrained: bool,
    },
    Svk {
        mu: f64,
        lambda: f64,
    },
    ValanisLandel {
        w: ScalarSpec,
        g: Option<ScalarSpec>,
    },
    DetFunction {
        f: ScalarSpec,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Box<dyn EnergyModel>> {
        Ok(match self {
            ModelSpec::NegLogDet => Box::new(NegLogDet::new()),
            ModelSpec::Prop2Quadratic {
                alpha,
                beta,
                unconstrained,
            } => {
                let beta = beta.unwrap_or(0.5 * (1.0 - 6.0 * alpha));
                if *unconstrained {
                    Box::new(Prop2Quadratic::unconstrained(*alpha, beta))
                } else {
                    Box::new(Prop2Quadratic::new(*alpha, beta)?)
                }
            }
            ModelSpec::Trace {
                alpha,
                beta,
                unconstrained,
            } => {
                let beta = beta.unwrap_or(0.5 * (1.0 - alpha));
                if *unconstrained {
                    Box::new(TraceModel::unconstrained(*alpha, beta))
                } else {
                    Box::new(TraceModel::new(*alpha, beta)?)
                }
            }
            ModelSpec::NeoHooke { .. } => Box::new(self.build_neo_hooke()?),
            ModelSpec::Svk { mu, lambda } => Box::new(SaintVenantKirchhoff::new(*mu, *lambda)),
            ModelSpec::ValanisLandel { w, g } => Box::new(ValanisLandelModel::new(
                w.build(),
                g.as_ref().map(ScalarSpec::build),
            )),
            ModelSpec::DetFunction { f } => Box::new(DetFunctionModel::new(f.build())),
        })
    }

    pub fn build_neo_hooke(&self) -> Result<NeoHookeMember> {
        match self {
            ModelSpec::NeoHooke {
                mu,
                alpha,
                beta,
                unconstrained,
            } => {
                let beta = beta.unwrap_or(1.0 - 6.0 * alpha);
                if *unconstrained {
                    Ok(NeoHookeMember::unconstrained(*mu, *alpha, beta))
                } else {
                    NeoHookeMember::new(*mu, *alpha, beta)
                }
            }
            other => Err(Error::Config(format!(
                "a neo_hooke model is required, got {}",
                other.name()
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::NegLogDet => "neg_log_det",
            ModelSpec::Prop2Quadratic { .. } => "prop2_quadratic",
            ModelSpec::Trace { .. } => "trace",
            ModelSpec::NeoHooke { .. } => "neo_hooke",
            ModelSpec::Svk { .. } => "svk",
            ModelSpec::ValanisLandel { .. } => "valanis_landel",
            ModelSpec::DetFunction { .. } => "det_function",
        }
    }
}
